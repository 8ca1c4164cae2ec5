"""Mean values of squarefree-supported multiplicative functions.

For a density gamma with gamma(p)/p bounded away from 1 and average dimension
kappa, g(p) = gamma(p)/(p - gamma(p)) satisfies
    sum_{d<z} mu^2(d) g(d) ~ c_gamma (log z)^kappa / Gamma(kappa + 1),
and the same with a smooth weight F(log(z/d)/log z).  This module measures
how close finite z gets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import is_squarefree, prime_factors, primes_up_to
from .errors import PreconditionError, ResourceGuardError
from .kernels import multiplicative
from .poly import Poly

KINDS = ("unit", "constant_k_off_A", "totient_like")
Z_GUARD = 10**8
EXACT_Z_GUARD = 10**5
C_CUTOFF = 10**6
SAMPLE_PRIMES = 1000


@dataclass(frozen=True)
class GammaSpec:
    """gamma(p) = 1, k, or p(k-1)/(p-1), and 0 on the primes of ``excluded``."""

    kind: str
    k: int = 1
    excluded: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"kind must be one of {KINDS}")
        if self.excluded < 1:
            raise PreconditionError("excluded must be a positive integer")
        if self.kind == "totient_like" and self.k < 2:
            raise PreconditionError("totient_like needs k >= 2")
        if self.kind == "constant_k_off_A" and self.k < 1:
            raise PreconditionError("constant_k_off_A needs k >= 1")
        self.check_omega1()

    @property
    def kappa(self) -> int:
        return {"unit": 1, "constant_k_off_A": self.k, "totient_like": self.k - 1}[self.kind]

    @property
    def excluded_primes(self) -> list[int]:
        return prime_factors(self.excluded)

    def gamma(self, p):
        """gamma on an array (or scalar) of primes."""
        p = np.asarray(p, dtype=np.float64)
        if self.kind == "unit":
            out = np.ones_like(p)
        elif self.kind == "constant_k_off_A":
            out = np.full_like(p, float(self.k))
        else:
            out = p * (self.k - 1) / (p - 1)
        out[np.isin(p, self.excluded_primes)] = 0.0
        return out

    def gamma_exact(self, p: int) -> Fraction:
        if self.excluded % p == 0:
            return Fraction(0)
        if self.kind == "unit":
            return Fraction(1)
        if self.kind == "constant_k_off_A":
            return Fraction(self.k)
        return Fraction(p * (self.k - 1), p - 1)

    def check_omega1(self) -> None:
        """0 <= gamma(p)/p < 1 on the sampled primes."""
        ps = primes_up_to(SAMPLE_PRIMES)
        ratio = self.gamma(ps) / ps
        bad = ps[(ratio < 0) | (ratio >= 1)]
        if bad.size:
            raise PreconditionError(f"gamma(p)/p outside [0, 1) at p = {int(bad[0])}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k, "excluded": self.excluded, "kappa": self.kappa}


@dataclass
class CGamma:
    value: float
    error_bound: float
    cutoff: int


def c_gamma(spec: GammaSpec, cutoff: int = C_CUTOFF) -> CGamma:
    """prod_p (1 - gamma(p)/p)^-1 (1 - 1/p)^kappa truncated at ``cutoff``.

    For p >= 4(kappa+1) each log-factor is at most 2(kappa+1)^2/p^2 in size,
    which bounds the tail by 2(kappa+1)^2/cutoff.
    """
    kappa = spec.kappa
    if cutoff < 4 * (kappa + 1):
        raise PreconditionError("cutoff too small for the tail bound")
    ps = primes_up_to(cutoff).astype(np.float64)
    logs = -np.log1p(-spec.gamma(ps) / ps) + kappa * np.log1p(-1.0 / ps)
    value = math.exp(math.fsum(logs.tolist()))
    tail = 2.0 * (kappa + 1) ** 2 / cutoff
    return CGamma(value, value * math.expm1(tail), cutoff)


@dataclass
class WirsingResult:
    z: float
    lhs: float
    main: float
    rel_err: float
    c_gamma: float
    lhs_exact: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "lhs": self.lhs,
            "lhs_exact": None if self.lhs_exact is None else str(self.lhs_exact),
            "main": self.main,
            "rel_err": self.rel_err,
            "rel_err_log_z": self.rel_err * math.log(self.z),
            "c_gamma": self.c_gamma,
        }


def _g_array(spec: GammaSpec, z: float) -> np.ndarray:
    n = math.ceil(z)
    if n > Z_GUARD:
        raise ResourceGuardError(f"z = {z} exceeds guard {Z_GUARD}")
    ps = primes_up_to(max(n - 1, 2))
    gam = spec.gamma(ps)
    return multiplicative(n, ps, gam / (ps - gam))


def _exact_lhs(spec: GammaSpec, z: float, F: Poly | None) -> Fraction:
    if z > EXACT_Z_GUARD:
        raise ResourceGuardError(f"exact mode needs z <= {EXACT_Z_GUARD}")
    if F is not None and F.degree > 0:
        raise PreconditionError("exact weighted sums need rational log-ratios; use a constant F")
    total = Fraction(0)
    for d in range(1, math.ceil(z)):
        if not is_squarefree(d):
            continue
        term = Fraction(1)
        for p in prime_factors(d):
            gp = spec.gamma_exact(p)
            term *= gp / (p - gp)
            if not term:
                break
        total += term
    return total * (F(Fraction(1)) if F is not None else 1)


def _weighted_lhs(spec: GammaSpec, z: float, F: Poly | None) -> float:
    g = _g_array(spec, z)
    if F is None:
        return math.fsum(g.tolist())
    d = np.arange(1, g.shape[0], dtype=np.float64)
    t = np.log(z / d) / math.log(z)
    w = np.polynomial.polynomial.polyval(t, [float(c) for c in F.c])
    return math.fsum((g[1:] * w).tolist())


def wirsing_sum(spec: GammaSpec, z: float, *, exact: bool = False, cutoff: int = C_CUTOFF) -> WirsingResult:
    """sum_{d<z} mu^2(d) g(d) against c_gamma (log z)^kappa / Gamma(kappa+1)."""
    if z < 2:
        raise PreconditionError("z must be >= 2")
    c = c_gamma(spec, cutoff).value
    main = c * math.log(z) ** spec.kappa / math.gamma(spec.kappa + 1)
    lhs_exact = _exact_lhs(spec, z, None) if exact else None
    lhs = float(lhs_exact) if exact else _weighted_lhs(spec, z, None)
    return WirsingResult(z, lhs, main, abs(lhs / main - 1), c, lhs_exact)


def weight_integral(F: Poly, kappa: int) -> Fraction:
    """integral_0^1 F(1-x) x^(kappa-1) dx, exactly."""
    G = F.shift_reflect()
    return sum((c / (i + kappa) for i, c in enumerate(G.c)), Fraction(0))


def wirsing_weighted(spec: GammaSpec, z: float, F: Poly, *, cutoff: int = C_CUTOFF) -> WirsingResult:
    """sum_{d<z} mu^2(d) g(d) F(log(z/d)/log z) against c (log z)^kappa / Gamma(kappa) * int F(1-x) x^(kappa-1)."""
    if z < 2:
        raise PreconditionError("z must be >= 2")
    c = c_gamma(spec, cutoff).value
    main = c * math.log(z) ** spec.kappa / math.gamma(spec.kappa) * float(weight_integral(F, spec.kappa))
    lhs = _weighted_lhs(spec, z, F)
    return WirsingResult(z, lhs, main, abs(lhs / main - 1) if main else math.inf, c)


def fit_decay_constant(results: list[WirsingResult]) -> dict:
    """rel_err * log z across runs, with its spread (max/min)."""
    vals = [r.rel_err * math.log(r.z) for r in results]
    lo, hi = min(vals), max(vals)
    return {"values": vals, "mean": sum(vals) / len(vals), "spread": hi / lo if lo > 0 else math.inf}
