"""Threshold constants for k, the exact minimal-k search, and prime-shift tuples."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import nth_primes, prime_pi
from .errors import PreconditionError
from .exact import ExactConstant
from .jint import EULER_GAMMA, JInputs, J_total, monomial_weight
from .poly import MAX_DEGREE, Poly
from .tuples import LinearTuple, is_admissible

VARIANTS = ("E2", "short_interval", "two_squares", "both")
SHORT_INTERVAL_B = 60


@dataclass(frozen=True)
class BoundQuery:
    nu: int
    B: Fraction
    variant: str = "E2"

    def __post_init__(self):
        if self.nu < 1:
            raise PreconditionError("nu must be >= 1")
        if not 2 < self.B <= 60:
            raise PreconditionError("need 2 < B <= 60")
        if self.variant not in VARIANTS:
            raise PreconditionError(f"variant must be one of {VARIANTS}")


@dataclass(frozen=True)
class LeadingConstant:
    variant: str
    nu: int
    B: Fraction
    constant: float
    gap_constant: float
    heuristic: bool = True

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "nu": self.nu,
            "B": str(self.B),
            "constant": self.constant,
            "gap_constant": self.gap_constant,
            "heuristic": self.heuristic,
        }


def leading_constant(q: BoundQuery) -> LeadingConstant:
    """Leading-order thresholds with every o(1) set to zero.

    ``constant`` bounds the tuple size k; ``gap_constant`` is the matching
    bound on the length of a window containing nu+1 consecutive hits.  The
    short-interval variants pin B = 60 whatever the query says.
    """
    nu = q.nu
    eg = math.exp(-EULER_GAMMA)
    if q.variant == "E2":
        B = float(q.B)
        c = 4 * eg / B * math.exp(B * nu / 4)
        gap = eg * nu * math.exp(B * nu / 4)
    elif q.variant == "short_interval":
        c = eg / 15 * math.exp(15 * nu)
        gap = eg * nu * math.exp(15 * nu)
    elif q.variant == "two_squares":
        B = float(q.B)
        c = 4 * eg / B * math.exp(B * nu)
        gap = 4 * eg * nu * math.exp(B * nu)
    else:
        c = eg / 15 * math.exp(60 * nu)
        gap = 4 * eg * nu * math.exp(60 * nu)
    return LeadingConstant(q.variant, nu, q.B, c, gap)


@dataclass
class MinKResult:
    k: int
    J_k: ExactConstant
    J_prev: ExactConstant | None
    family: str
    nu_effective: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "family": self.family,
            "nu_effective": self.nu_effective,
            "J_k": self.J_k.to_json(),
            "J_k_sign": self.J_k.sign(),
            "J_prev": None if self.J_prev is None else self.J_prev.to_json(),
            "J_prev_sign": None if self.J_prev is None else self.J_prev.sign(),
        }


class SearchExhausted(PreconditionError):
    pass


def _family_poly(family: str, k: int, P: Poly | None) -> Poly:
    if family == "fixed":
        if P is None:
            raise PreconditionError("the fixed family needs a polynomial")
        return P
    if family == "monomial_sqrt_k":
        return monomial_weight(isqrt(k))
    raise PreconditionError(f"unknown family {family!r}")


def detection_constant(k: int, nu: int, B, eta, P: Poly) -> ExactConstant:
    return J_total(JInputs(k, Fraction(B), Fraction(eta), P, nu))


def min_k(nu: int, B, eta=0, family: str = "fixed", P: Poly | None = None, *,
          k_max: int = 10**4, two_squares: bool = False) -> MinKResult:
    """Smallest k >= 2 whose detection constant is certified positive.

    The scan is exhaustive, so every k below the answer is certified
    non-positive; the result carries the two boundary values.  With
    ``two_squares`` the combination uses 4*nu in place of nu.
    """
    if nu < 0:
        raise PreconditionError("nu must be nonnegative")
    B, eta = Fraction(B), Fraction(eta)
    nu_eff = 4 * nu if two_squares else nu
    prev = None
    for k in range(2, k_max + 1):
        if family == "monomial_sqrt_k" and isqrt(k) > MAX_DEGREE:
            raise SearchExhausted(f"no k <= {k - 1} works; the monomial family exceeds degree {MAX_DEGREE} beyond")
        J = detection_constant(k, nu_eff, B, eta, _family_poly(family, k, P))
        if J.sign() > 0:
            return MinKResult(k, J, prev, family, nu_eff)
        prev = J
    raise SearchExhausted(f"no k <= {k_max} gives a positive detection constant")


def tuple_of_primes(k: int) -> LinearTuple:
    """{n + p : p the k consecutive primes after the first pi(k)}."""
    if k < 2:
        raise PreconditionError("k must be >= 2")
    shifts = nth_primes(prime_pi(k) + 1, k)
    t = LinearTuple.from_shifts(shifts)
    assert is_admissible(t)
    return t
