from .settings import Configuration

__all__ = ["Configuration"]
