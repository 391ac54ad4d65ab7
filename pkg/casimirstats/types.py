from typing import Dict, Any, Union, Literal

import numpy as np
import numpy.typing as npt

# Array types used across the package
FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
ArrayLike = Union[float, int, npt.ArrayLike]

# How a photon distribution was obtained
PdfMethod = Literal[
    "exact",
    "asymptotic-smooth",
    "asymptotic-oscillating",
    "ideal-squeezed",
    "oracle",
]

# Shape of the photon distribution, decided by the sign of D-
Regime = Literal["smooth", "oscillating", "thermal-boundary"]

# Pipelines understood by the command-line front end
Mode = Literal["dynamics", "pulsetrain", "pdf", "compare", "sweep"]

# Plain records written to summary tables
SummaryRow = Dict[str, Any]
