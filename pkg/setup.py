from setuptools import setup, find_packages

with open("casimirstats/README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="casimirstats",
    version="0.1.0",
    description="Photon statistics of the dissipative dynamical Casimir effect",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.12",
        "pydantic>=2.9",
        "mpmath>=1.3",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0.0",
            "pytest-cov>=2.10.0",
            "black>=20.8b1",
            "isort>=5.7.0",
            "mypy>=0.800",
            "sphinx>=3.5.0",
            "sphinx-rtd-theme>=0.5.1",
        ],
    },
    entry_points={
        "console_scripts": [
            "casimirstats=casimirstats.cli.main:main",
        ],
    },
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
