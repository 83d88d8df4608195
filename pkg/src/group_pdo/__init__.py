"""Matrix-symbol pseudo-differential calculus on compact groups.

Backends for the n-torus and SU(2): group Fourier analysis, matrix symbols
and their difference/derivative calculus, quantization, and a numerical lab
for Lp boundedness experiments.
"""

from .errors import BandExhaustedError, GroupPdoError, PrecisionError, SingularSymbolError
from .groups import SU2, DualIndex, Torus, group_by_name

__version__ = "0.1.0"

__all__ = [
    "SU2",
    "Torus",
    "DualIndex",
    "group_by_name",
    "GroupPdoError",
    "PrecisionError",
    "BandExhaustedError",
    "SingularSymbolError",
    "__version__",
]
