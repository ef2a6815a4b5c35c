"""minflow: a desk-scale symbolic dynamics laboratory.

Substitution subshifts (Thue-Morse, Fibonacci, period-doubling), their
points and sliding block codes, proximal/asymptotic pair classification,
dyadic odometer factor maps, and semi-regularity experiments.
"""

from .kernels import BACKEND
from .words import REGISTRY, SubshiftSystem, Substitution, get_system

__version__ = "0.1.0"

__all__ = ["BACKEND", "REGISTRY", "SubshiftSystem", "Substitution",
           "get_system", "__version__"]
