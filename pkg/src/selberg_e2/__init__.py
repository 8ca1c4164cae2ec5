"""Selberg-sieve detection of products of two primes in admissible tuples of linear forms."""

from .errors import InadmissibleError, PreconditionError, ResourceGuardError
from .poly import Poly
from .tuples import LinearForm, LinearTuple, NormalizedTuple, is_admissible, normalize, singular_series

__version__ = "0.1.0"

__all__ = [
    "InadmissibleError",
    "LinearForm",
    "LinearTuple",
    "NormalizedTuple",
    "Poly",
    "PreconditionError",
    "ResourceGuardError",
    "is_admissible",
    "normalize",
    "singular_series",
]
