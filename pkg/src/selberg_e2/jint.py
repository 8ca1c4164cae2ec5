"""Closed-form evaluation of the J-integral constants for polynomial weights.

All inner integrals of a rational polynomial are rational polynomials in the
outer variable y, and the outer kernel splits as 1/y + 1/(B - y).  The outer
integral therefore lands in rationals plus rational multiples of logs, which
``ExactConstant`` represents exactly.  Passing float ``B``/``eta`` switches to
a high-precision numeric evaluation of the same formulas.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

from .errors import PreconditionError
from .exact import ExactConstant
from .poly import MAX_DEGREE, Poly, integrate_coeffs

EULER_GAMMA = float(mpmath.euler)


@dataclass(frozen=True)
class JInputs:
    k: int
    B: Fraction | float
    eta: Fraction | float
    poly: Poly
    nu: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise PreconditionError("k must be >= 2")
        if self.B <= 2:
            raise PreconditionError("B must exceed 2")
        if self.eta < 0:
            raise PreconditionError("eta must be nonnegative")
        if self.nu < 0:
            raise PreconditionError("nu must be nonnegative")
        _check_degree(self.poly)


def _check_degree(P: Poly) -> None:
    if P.degree > MAX_DEGREE:
        raise PreconditionError(f"polynomial degree {P.degree} exceeds {MAX_DEGREE}")


def _as_number(x):
    """Rationals stay exact; floats become mpf for the numeric path."""
    if isinstance(x, float):
        return mpmath.mpf(x)
    return Fraction(x)


def _is_exact(*xs) -> bool:
    return all(isinstance(x, Fraction) for x in xs)


@lru_cache(maxsize=4096)
def _one_minus_pow(n: int) -> Poly:
    return Poly(comb(n, j) * (-1) ** j for j in range(n + 1))


def _shifted_binomial_poly(P: Poly, k: int, power: int) -> Poly:
    return (P * P) * _one_minus_pow(power)


def J0(k: int, P: Poly) -> ExactConstant:
    """Integral over [0,1] of P(1-x)^2 x^(k-1), i.e. of P(u)^2 (1-u)^(k-1)."""
    _check_degree(P)
    return ExactConstant(_shifted_binomial_poly(P, k, k - 1).definite(0, 1))


def _K(k: int, P: Poly) -> Poly:
    """Antiderivative (vanishing at 0) of Ptilde(u)^2 (1-u)^(k-2)."""
    Pt = P.integral()
    return _shifted_binomial_poly(Pt, k, k - 2).integral()


def J_varpi(k: int, P: Poly) -> ExactConstant:
    _check_degree(P)
    return ExactConstant(_K(k, P)(Fraction(1)))


def _inner_J2(k: int, P: Poly) -> Poly:
    # integral_{1-y}^{1} Ptilde(1-x)^2 x^(k-2) dx = K(y) after u = 1 - x
    return _K(k, P)


def _inner_J1(k: int, P: Poly) -> Poly:
    """integral_0^{1-y} (Ptilde(1-x) - Ptilde(1-x-y))^2 x^(k-2) dx as a polynomial in y."""
    t = P.integral().c
    # G(u, y) = Ptilde(u) - Ptilde(u - y) as {(deg_u, deg_y): coeff}
    G: dict[tuple[int, int], Fraction] = {}
    for m, tm in enumerate(t):
        if not tm:
            continue
        for j in range(1, m + 1):
            key = (m - j, j)
            G[key] = G.get(key, 0) + tm * comb(m, j) * (-1) ** (j + 1)
    G2: dict[tuple[int, int], Fraction] = {}
    items = [(key, v) for key, v in G.items() if v]
    for (i1, j1), v1 in items:
        for (i2, j2), v2 in items:
            key = (i1 + i2, j1 + j2)
            G2[key] = G2.get(key, 0) + v1 * v2
    # integral_{u=y}^{1} u^i (1-u)^(k-2) du = H_i(1) - H_i(y)
    out = Poly()
    by_i: dict[int, Poly] = {}
    for (i, j), v in G2.items():
        by_i[i] = by_i.get(i, Poly()) + Poly.monomial(j, v)
    for i, ypoly in by_i.items():
        H = (Poly.monomial(i) * _one_minus_pow(k - 2)).integral()
        out = out + ypoly * (Poly([H(Fraction(1))]) - H)
    return out


def _outer(Q: Poly, a, B):
    """integral_a^1 (1/y + 1/(B - y)) Q(y) dy, exactly when a, B are rational."""
    exact = _is_exact(a, B)
    q0 = Q.c[0] if Q.c else Fraction(0)
    Q1 = Poly(Q.c[1:])
    q_div, qB = Q.divide_linear(B)
    if exact:
        total = ExactConstant(Q1.definite(a, Fraction(1)) - integrate_coeffs(q_div, a, Fraction(1)))
        if q0:
            if a == 0:
                raise ArithmeticError("non-integrable 1/y singularity")
            total = total - ExactConstant.log_of(a, q0)
        if qB:
            total = total + ExactConstant.log_of(B - a, qB) - ExactConstant.log_of(B - 1, qB)
        return total
    one = mpmath.mpf(1)
    total = Q1.definite(a, one) - integrate_coeffs(q_div, a, one)
    if q0:
        if a == 0:
            raise ArithmeticError("non-integrable 1/y singularity")
        total -= (mpmath.mpf(q0.numerator) / q0.denominator) * mpmath.log(a)
    total += qB * (mpmath.log(B - a) - mpmath.log(B - 1))
    return total


def _dps_for(Q: Poly, B=1) -> int:
    """Working digits for the numeric path.

    Covers the coefficient sizes plus the growth B^deg of synthetic division by
    (y - B), both of which cancel in the final value.
    """
    size = max((len(str(c.numerator)) + len(str(c.denominator)) for c in Q.c), default=0)
    growth = max(Q.degree, 0) * (int(math.log10(max(float(B), 2.0))) + 1)
    return 40 + size + growth


def _finish(value, exact):
    if exact:
        return value
    return float(value)


def _lower_limit(B, eta):
    a = B * eta
    if a >= 1:
        warnings.warn("B*eta >= 1: empty integration range, J1 = J2 = 0", stacklevel=3)
        return None
    return a


def J1(k: int, B, eta, P: Poly):
    _check_degree(P)
    B, eta = _as_number(B), _as_number(eta)
    exact = _is_exact(B, eta)
    a = _lower_limit(B, eta)
    if a is None:
        return ExactConstant(0) if exact else 0.0
    Q = _inner_J1(k, P)
    with mpmath.workdps(_dps_for(Q, B)):
        return _finish(_outer(Q, a, B), exact)


def J2(k: int, B, eta, P: Poly):
    _check_degree(P)
    B, eta = _as_number(B), _as_number(eta)
    exact = _is_exact(B, eta)
    a = _lower_limit(B, eta)
    if a is None:
        return ExactConstant(0) if exact else 0.0
    Q = _inner_J2(k, P)
    with mpmath.workdps(_dps_for(Q, B)):
        return _finish(_outer(Q, a, B), exact)


def J3(k: int, B, P: Poly):
    """J_varpi * log(B - 1): the y-integral of 1/y + 1/(B-y) over [1, B/2]."""
    _check_degree(P)
    B = _as_number(B)
    if B <= 2:
        raise PreconditionError("J3 needs B > 2")
    jv = J_varpi(k, P)
    if _is_exact(B):
        return ExactConstant.log_of(B - 1, jv.rational)
    with mpmath.workdps(_dps_for(Poly([jv.rational]))):
        return float(jv.rational.numerator * mpmath.log(B - 1) / jv.rational.denominator)


@dataclass
class JReport:
    inputs: JInputs
    with_primes: bool
    J0: ExactConstant
    J1: ExactConstant | float
    J2: ExactConstant | float
    J3: ExactConstant | float
    J_varpi: ExactConstant
    J: ExactConstant | float

    def to_json(self) -> dict:
        def enc(v):
            return v.to_json() if isinstance(v, ExactConstant) else {"numeric": v}

        return {
            "k": self.inputs.k,
            "B": str(self.inputs.B),
            "eta": str(self.inputs.eta),
            "nu": self.inputs.nu,
            "poly": self.inputs.poly.coeff_strings(),
            "with_primes": self.with_primes,
            "J0": enc(self.J0),
            "J1": enc(self.J1),
            "J2": enc(self.J2),
            "J3": enc(self.J3),
            "J_varpi": enc(self.J_varpi),
            "J": enc(self.J),
        }


def J_total(inputs: JInputs, with_primes: bool = False):
    """The detection constant k(k-1)/B * (J1 + J2 + J3 [+ J_varpi]) - nu * J0.

    This is (k-1)! times the bracketed combination governing the sign of the
    combined sum; the factor is positive so the sign is unchanged, and it is
    the normalization in which the tabulated values are quoted.
    """
    return evaluate(inputs, with_primes).J


def evaluate(inputs: JInputs, with_primes: bool = False) -> JReport:
    k, B, eta, P, nu = inputs.k, _as_number(inputs.B), _as_number(inputs.eta), inputs.poly, inputs.nu
    j0 = J0(k, P)
    j1 = J1(k, inputs.B, inputs.eta, P)
    j2 = J2(k, inputs.B, inputs.eta, P)
    j3 = J3(k, inputs.B, P)
    jv = J_varpi(k, P)
    inner = j1 + j2 + j3 + (jv if with_primes else 0)
    if _is_exact(B, eta):
        J = inner * (Fraction(k * (k - 1)) / B) - j0 * nu
    else:
        J = float(inner) * k * (k - 1) / float(B) - nu * float(j0)
    return JReport(inputs, with_primes, j0, j1, j2, j3, jv, J)


# ---- monomial family helpers -------------------------------------------------


def monomial_weight(ell: int) -> Poly:
    """x^ell / ell!"""
    return Poly.monomial(ell, Fraction(1, factorial(ell)))


def beta_moment(m: int, n: int) -> Fraction:
    """integral_0^1 x^m (1-x)^n dx."""
    return Fraction(factorial(m) * factorial(n), factorial(m + n + 1))


def A_kl(k: int, ell: int) -> Fraction:
    return Fraction(comb(2 * ell + 2, ell + 1), factorial(k + 2 * ell + 1))


def A0_kl(k: int, ell: int) -> Fraction:
    return Fraction(comb(2 * ell, ell), factorial(k + 2 * ell))


def harmonic_L(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def C_ell(ell: int) -> Fraction:
    """sum_{j=1}^{ell+1} [(ell+1)...(ell+2-j)] / [(2ell+2)...(2ell+3-j)] / j."""
    total = Fraction(0)
    ratio = Fraction(1)
    for j in range(1, ell + 2):
        ratio *= Fraction(ell + 2 - j, 2 * ell + 3 - j)
        total += ratio / j
    return total


def asymptotic_J_main(k: int, ell: int, B) -> float:
    """Leading-order A(k, ell) * log(B e^gamma k / 4) for (J1+J2+J3)/(k-2)!."""
    return float(A_kl(k, ell)) * math.log(float(B) * math.exp(EULER_GAMMA) * k / 4)
