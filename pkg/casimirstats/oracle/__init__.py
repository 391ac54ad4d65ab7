from .api import MAX_DIM, decompose, fock_pdf, default_dim
from .models import SqueezedThermalDecomposition

__all__ = [
    "MAX_DIM",
    "decompose",
    "fock_pdf",
    "default_dim",
    "SqueezedThermalDecomposition",
]
