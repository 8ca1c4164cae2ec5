"""Selberg weights for a normalized tuple.

Weights are carried with the singular-series factor divided out, so every
quantity here is homogeneous of degree zero (y, lambda, y*) or two (T_delta)
in that factor.  All routines accept either exact ``Fraction`` y-vectors or
float ones; the dense float path runs through the kernels.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import is_squarefree, prime_factors, primes_up_to, squarefree_coprime_upto
from .errors import PreconditionError, ResourceGuardError
from .kernels import multiple_sums, multiplicative
from .poly import Poly
from .tuples import NormalizedTuple

R_GUARD = 10**7


@dataclass(frozen=True)
class SieveParams:
    tuple: NormalizedTuple
    R: float
    poly: Poly

    def __post_init__(self):
        if self.R < 2:
            raise PreconditionError("R must be at least 2")
        if self.poly.is_zero():
            raise PreconditionError("weight polynomial is identically zero")

    @property
    def k(self) -> int:
        return self.tuple.k


def support(nt: NormalizedTuple, R: float) -> list[int]:
    """Squarefree d < R coprime to A."""
    return _support_cached(nt.A, float(R))


@lru_cache(maxsize=64)
def _support_cached(A: int, R: float) -> list[int]:
    return squarefree_coprime_upto(R, A)


def _check_arg(nt: NormalizedTuple, d: int) -> list[int]:
    if d < 1 or not is_squarefree(d):
        raise PreconditionError(f"{d} is not squarefree")
    if math.gcd(d, nt.A) != 1:
        raise PreconditionError(f"gcd({d}, A) > 1")
    ps = prime_factors(d)
    if any(p <= nt.k for p in ps):
        raise AssertionError("prime <= k coprime to A: tuple is not normalized")
    return ps


def f_value(nt: NormalizedTuple, d: int) -> Fraction:
    """d / tau_k(d) = prod p/k."""
    return math.prod((Fraction(p, nt.k) for p in _check_arg(nt, d)), start=Fraction(1))


def f1_value(nt: NormalizedTuple, d: int) -> Fraction:
    return math.prod((Fraction(p - nt.k, nt.k) for p in _check_arg(nt, d)), start=Fraction(1))


def fstar_value(nt: NormalizedTuple, d: int) -> Fraction:
    """phi(d) / tau_{k-1}(d) = prod (p-1)/(k-1)."""
    if nt.k < 2:
        raise PreconditionError("f* needs k >= 2")
    return math.prod((Fraction(p - 1, nt.k - 1) for p in _check_arg(nt, d)), start=Fraction(1))


def f1star_value(nt: NormalizedTuple, d: int) -> Fraction:
    if nt.k < 2:
        raise PreconditionError("f1* needs k >= 2")
    return math.prod((Fraction(p - nt.k, nt.k - 1) for p in _check_arg(nt, d)), start=Fraction(1))


def _mu(d: int) -> int:
    return -1 if len(prime_factors(d)) % 2 else 1


def y_r(params: SieveParams, r: int) -> float:
    """P(log(R/r)/log R) on the support, 0 elsewhere."""
    R = params.R
    if r < 1 or r >= R or math.gcd(r, params.tuple.A) != 1 or not is_squarefree(r):
        return 0.0
    return float(params.poly(math.log(R / r) / math.log(R)))


@dataclass
class WeightTable:
    """lambda_hat on squarefree d < R coprime to A (absent entries are 0)."""

    tuple: NormalizedTuple
    R: float
    y: dict[int, object]
    lambda_hat: dict[int, object]
    exact: bool
    _ystar: dict[int, object] | None = field(default=None, repr=False)

    def __getitem__(self, d: int):
        return self.lambda_hat.get(d, 0)

    @property
    def k(self) -> int:
        return self.tuple.k

    @property
    def support(self) -> list[int]:
        return support(self.tuple, self.R)

    def max_ratio(self) -> float:
        top = max((abs(float(v)) for v in self.lambda_hat.values()), default=0.0)
        return top / math.log(self.R) ** self.k

    def y_star(self) -> dict[int, object]:
        if self._ystar is None:
            self._ystar = y_star_table(self)
        return self._ystar

    def to_json(self) -> dict:
        enc = str if self.exact else float
        return {
            "R": self.R,
            "k": self.k,
            "A": self.tuple.A,
            "exact": self.exact,
            "entries": [{"d": d, "lambda_hat": enc(v)} for d, v in sorted(self.lambda_hat.items())],
            "max_ratio": self.max_ratio(),
        }


def _guard(R: float) -> None:
    if R > R_GUARD:
        raise ResourceGuardError(f"R = {R} exceeds guard {R_GUARD}")


def _dense_arrays(nt: NormalizedTuple, R: float):
    """Float arrays over [0, ceil(R)): support mask, mu, f, f1, phi (valid on the support)."""
    n = math.ceil(R)
    ps = primes_up_to(max(n - 1, 1))
    coprime = np.array([nt.A % int(p) != 0 for p in ps], dtype=bool)
    k = nt.k
    on = np.where(coprime, 1.0, 0.0)
    # indices stop at ceil(R) - 1 < R, so the mask is exactly the support
    mask = multiplicative(n, ps, on) != 0
    mu = multiplicative(n, ps, -on)
    f = multiplicative(n, ps, on * ps / k)
    f1 = multiplicative(n, ps, on * (ps - k) / k)
    phi = multiplicative(n, ps, on * (ps - 1))
    return mask, mu, f, f1, phi


def lambda_table(params: SieveParams) -> WeightTable:
    """Float weights from y_r = P(log(R/r)/log R)."""
    nt, R = params.tuple, params.R
    _guard(R)
    mask, mu, f, f1, _ = _dense_arrays(nt, R)
    idx = np.flatnonzero(mask)
    logR = math.log(R)
    yv = np.zeros(mask.shape[0])
    coeffs = [float(c) for c in params.poly.c]
    t = np.log(R / np.maximum(idx, 1)) / logR
    yv[idx] = np.polynomial.polynomial.polyval(t, coeffs)
    w = np.zeros_like(yv)
    w[idx] = yv[idx] / f1[idx]
    S = multiple_sums(w)
    lam = mu * f * S
    y = {int(d): float(yv[d]) for d in idx}
    table = {int(d): float(lam[d]) for d in idx}
    return WeightTable(nt, R, y, table, exact=False)


def lambda_from_y(nt: NormalizedTuple, R: float, y: dict[int, object]) -> WeightTable:
    """lambda_hat_d = mu(d) f(d) sum_{d|m} y_m / f1(m), exact when y is rational."""
    _guard(R)
    supp = support(nt, R)
    sset = set(supp)
    if any(r not in sset for r, v in y.items() if v):
        raise PreconditionError("y has entries outside the support")
    exact = all(isinstance(v, (Fraction, int)) for v in y.values())
    w = {m: Fraction(y.get(m, 0)) / f1_value(nt, m) if exact else float(y.get(m, 0)) / float(f1_value(nt, m)) for m in supp}
    top = math.ceil(R)
    lam = {}
    for d in supp:
        s = sum((w[m] for m in range(d, top, d) if m in w), Fraction(0) if exact else 0.0)
        fd = f_value(nt, d) if exact else float(f_value(nt, d))
        lam[d] = _mu(d) * fd * s
    ys = {m: (Fraction(y.get(m, 0)) if exact else float(y.get(m, 0))) for m in supp}
    return WeightTable(nt, R, ys, lam, exact=exact)


def y_from_lambda(table: WeightTable) -> dict[int, object]:
    """Forward transform y_r = mu(r) f1(r) sum_d lambda_{dr} / f(dr)."""
    nt = table.tuple
    supp = table.support
    exact = table.exact
    conv = (lambda x: x) if exact else float
    w = {m: table[m] / conv(f_value(nt, m)) for m in supp}
    top = math.ceil(table.R)
    out = {}
    for r in supp:
        s = sum((w[m] for m in range(r, top, r) if m in w), Fraction(0) if exact else 0.0)
        out[r] = _mu(r) * conv(f1_value(nt, r)) * s
    return out


def y_star_table(table: WeightTable) -> dict[int, object]:
    """y*_r = mu^2(r) r/phi(r) sum'_m y_{mr}/phi(m) = r * sum_{r | n} y_n / phi(n)."""
    supp = table.support
    top = math.ceil(table.R)
    if table.exact:
        w = {n: Fraction(table.y.get(n, 0)) / _phi_sf(n) for n in supp}
        return {r: r * sum((w[n] for n in range(r, top, r) if n in w), Fraction(0)) for r in supp}
    mask, _, _, _, phi = _dense_arrays(table.tuple, table.R)
    w = np.zeros(mask.shape[0])
    for n in supp:
        w[n] = table.y.get(n, 0.0) / phi[n]
    S = multiple_sums(w)
    return {r: float(r * S[r]) for r in supp}


def y_star(params: SieveParams, table: WeightTable, r: int):
    """y*_r for any r (0 off the support)."""
    if r >= table.R or r not in set(table.support):
        return Fraction(0) if table.exact else 0.0
    return table.y_star()[r]


def _phi_sf(n: int) -> int:
    return math.prod(p - 1 for p in prime_factors(n)) if n > 1 else 1


def _check_delta(nt: NormalizedTuple, delta: int) -> None:
    if delta < 1 or not is_squarefree(delta):
        raise PreconditionError(f"delta = {delta} is not squarefree")
    if math.gcd(delta, nt.A) != 1:
        raise PreconditionError(f"gcd(delta = {delta}, A) > 1")


def T_delta_bilinear(table: WeightTable, delta: int):
    """sum' lambda_d lambda_e / f*([d, e, delta] / delta)."""
    nt = table.tuple
    _check_delta(nt, delta)
    k = nt.k
    dprimes = set(prime_factors(delta))
    entries = [(d, v, frozenset(prime_factors(d))) for d, v in table.lambda_hat.items() if v]
    inv_fstar: dict[frozenset, object] = {}
    zero = Fraction(0) if table.exact else 0.0
    total = zero
    for d, ld, pd in entries:
        for e, le, pe in entries:
            key = (pd | pe) - dprimes
            val = inv_fstar.get(key)
            if val is None:
                val = math.prod((Fraction(k - 1, p - 1) for p in key), start=Fraction(1))
                if not table.exact:
                    val = float(val)
                inv_fstar[key] = val
            total += ld * le * val
    return total


def T_delta_diagonal(table: WeightTable, delta: int):
    """sum'_{(r, delta)=1} mu^2(r)/f1*(r) (sum_{s|delta} mu(s) y*_{rs})^2."""
    nt = table.tuple
    _check_delta(nt, delta)
    ys = table.y_star()
    divisors = [(s, _mu(s)) for s in range(1, delta + 1) if delta % s == 0]
    zero = Fraction(0) if table.exact else 0.0
    total = zero
    for r in table.support:
        if math.gcd(r, delta) != 1:
            continue
        inner = zero
        for s, mus in divisors:
            v = ys.get(r * s)
            if v:
                inner += mus * v
        if inner:
            g = f1star_value(nt, r)
            total += inner * inner / (g if table.exact else float(g))
    return total


def G_star(nt: NormalizedTuple, u: float) -> Fraction:
    """sum'_{r < u} mu^2(r) / f1*(r)."""
    if u < 1:
        raise PreconditionError("u must be >= 1")
    return sum((1 / f1star_value(nt, r) for r in squarefree_coprime_upto(u, nt.A)), Fraction(0))


def L_r(r: int) -> float:
    """1 + sum_{p | r} log(p)/p."""
    return 1.0 + sum(math.log(p) / p for p in prime_factors(r))


def random_rational_y(nt: NormalizedTuple, R: float, rng: random.Random, span: int = 9) -> dict[int, Fraction]:
    """Small random rationals on the support (test oracle input)."""
    return {r: Fraction(rng.randint(-span, span), rng.randint(1, span)) for r in support(nt, R)}


def ystar_asymptotic_deviation(params: SieveParams, table: WeightTable | None = None) -> dict:
    """max_r |y*_r - (phi(A)/A) log R Ptilde(log(R/r)/log R)| / L(r) over the support."""
    table = table or lambda_table(params)
    nt, R = params.tuple, params.R
    ys = table.y_star()
    logR = math.log(R)
    dens = math.prod(1 - 1 / p for p in nt.primes_of_A)
    Pt = params.poly.integral()
    worst, arg = 0.0, 1
    for r, v in ys.items():
        pred = dens * logR * float(Pt(math.log(R / r) / logR))
        dev = abs(v - pred) / L_r(r)
        if dev > worst:
            worst, arg = dev, r
    return {"R": R, "c": worst, "argmax": arg}
