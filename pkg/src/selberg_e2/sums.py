"""Weighted detection sums over N < n <= 2N by segmented sieving.

For every n the sieve weight sum  sum_{d | P(n)} lambda_hat_d  is built by
adding lambda_hat_d along the progressions n = rho (mod d), rho a root of
P mod d.  Each segment is then squared and masked by beta / primality of the
individual form values.  Float mode accumulates doubles; exact mode scales the
rational weights to a common denominator and accumulates Python integers.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import factorize
from .e2 import SEGMENT, BetaConfig, FactorTable, _sieve_primes_for, beta_mask
from .errors import PreconditionError, ResourceGuardError
from .jint import J0, J1, J2, J3, J_varpi
from .kernels import accumulate, factor_progression
from .tuples import roots_mod, singular_series
from .weights import SieveParams, WeightTable, lambda_table

N_GUARD = 10**8
EXACT_N_GUARD = 10**5
PROGRESSION_GUARD = 5 * 10**6


@dataclass
class SumReport:
    kind: str
    N: int
    R: float
    k: int
    exact: float
    main_term: float | None
    ratio: float | None
    singular_series: float
    exact_rational: Fraction | None = None
    components: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "R": self.R,
            "k": self.k,
            "exact": self.exact,
            "exact_rational": None if self.exact_rational is None else str(self.exact_rational),
            "main_term": self.main_term,
            "ratio": self.ratio,
            "singular_series": self.singular_series,
            "components": self.components,
        }


@dataclass
class Winner:
    n: int
    source_n: int
    forms: list[int]
    values: list[int]

    def factorizations(self) -> list[str]:
        return ["*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factorize(v).items())) for v in self.values]


def _check(params: SieveParams, N: int, exact: bool) -> None:
    if N < 1:
        raise PreconditionError("N must be positive")
    if params.R * params.R > N:
        raise PreconditionError("need R <= N^(1/2)")
    if N > N_GUARD:
        raise ResourceGuardError(f"N = {N} exceeds guard {N_GUARD}")
    if exact and N > EXACT_N_GUARD:
        raise ResourceGuardError(f"exact mode needs N <= {EXACT_N_GUARD}")


def _progressions(table: WeightTable, exact: bool):
    nt = table.tuple
    res, mods, wts = [], [], []
    for d, lam in sorted(table.lambda_hat.items()):
        if not lam:
            continue
        w = Fraction(lam) if exact else float(lam)
        for r in roots_mod(nt, d):
            res.append(r)
            mods.append(d)
            wts.append(w)
        if len(res) > PROGRESSION_GUARD:
            raise ResourceGuardError("too many residue progressions")
    if not exact:
        return np.array(res, dtype=np.int64), np.array(mods, dtype=np.int64), np.array(wts, dtype=np.float64), None
    denom = math.lcm(*(w.denominator for w in wts)) if wts else 1
    ints = np.empty(len(wts), dtype=object)
    ints[:] = [w.numerator * (denom // w.denominator) for w in wts]
    return res, mods, ints, denom


@dataclass
class _Sweep:
    s0: object
    s1: list
    spi: list
    winners: list[Winner]
    beta_counts: list[int]
    denom: int | None


def _sweep(params: SieveParams, N: int, cfg: BetaConfig | None, *, exact: bool, table: WeightTable | None,
           nu: int | None = None, tilde: bool = False, segment: int = SEGMENT) -> _Sweep:
    _check(params, N, exact)
    if cfg is not None and cfg.N != N:
        raise PreconditionError("beta configuration must use the same N as the sum")
    table = table or lambda_table(params)
    nt = table.tuple
    res, mods, wts, denom = _progressions(table, exact)
    forms = nt.forms
    primes = [_sieve_primes_for(f.a * 2 * N + f.b) for f in forms]
    zero = 0 if exact else 0.0
    s0, s1, spi = [], [[] for _ in forms], [[] for _ in forms]
    beta_counts = [0] * len(forms)
    winners: list[Winner] = []
    for lo in range(N + 1, 2 * N + 1, segment):
        hi = min(lo + segment, 2 * N + 1)
        acc = np.zeros(hi - lo, dtype=object if exact else np.float64)
        if exact:
            acc[:] = 0
        accumulate(acc, lo, res, mods, wts)
        sq = acc * acc
        s0.append(sq.sum())
        hits = np.zeros(hi - lo, dtype=np.int64)
        for j, f in enumerate(forms):
            om, big, least = factor_progression(f.a, f.b, lo, hi - lo, primes[j])
            ft = FactorTable(lo, hi, om, big, least, f.a, f.b)
            pmask = big == 1
            spi[j].append(sq[pmask].sum() if pmask.any() else zero)
            if cfg is not None:
                bmask = beta_mask(ft, cfg)
                beta_counts[j] += int(np.count_nonzero(bmask))
                s1[j].append(sq[bmask].sum() if bmask.any() else zero)
                hits += bmask | pmask if tilde else bmask
        if nu is not None:
            for i in np.flatnonzero(hits >= nu + 1).tolist():
                n = lo + i
                winners.append(Winner(n, nt.source_n(n), [], [f(n) for f in forms]))
    if winners and cfg is not None:
        _mark_winner_forms(winners, nt, cfg, tilde)

    def total(parts):
        if exact:
            return Fraction(sum(parts), denom * denom)
        return math.fsum(parts)

    return _Sweep(total(s0), [total(p) for p in s1], [total(p) for p in spi], winners, beta_counts, denom)


def _mark_winner_forms(winners: list[Winner], nt, cfg: BetaConfig, tilde: bool) -> None:
    for w in winners:
        w.forms = [j for j, v in enumerate(w.values) if _beta_value(v, cfg) or (tilde and _is_prime_value(v))]


def _is_prime_value(v: int) -> bool:
    f = factorize(v)
    return len(f) == 1 and next(iter(f.values())) == 1


def _beta_value(v: int, cfg: BetaConfig) -> bool:
    f = factorize(v)
    if len(f) != 2 or any(e != 1 for e in f.values()):
        return False
    p1, p2 = sorted(f)
    ok = cfg.Y < p1 and p1 * p1 <= cfg.N < p2 * p2
    if cfg.mode == "mod4":
        ok = ok and p1 % 4 == 1 and p2 % 4 == 1
    return ok


# ---- main terms ---------------------------------------------------------------


def _b_and_eta(params: SieveParams, N: int, cfg: BetaConfig | None):
    b = math.log(N) / math.log(params.R)
    eta = math.log(cfg.Y) / math.log(N) if cfg is not None and cfg.Y > 1 else 0.0
    return b, eta


def main_S0(params: SieveParams, N: int, sing: float) -> float:
    """Prediction for the normalized sum: N (log R)^k J0 / ((k-1)! S)."""
    k = params.k
    return N * math.log(params.R) ** k * float(J0(k, params.poly)) / math.factorial(k - 1) / sing


def _s1_scale(params: SieveParams, N: int, sing: float) -> float:
    k = params.k
    return N * math.log(params.R) ** (k + 1) / (math.factorial(k - 2) * math.log(N)) / sing


def main_S1(params: SieveParams, N: int, cfg: BetaConfig, sing: float) -> float | None:
    b, eta = _b_and_eta(params, N, cfg)
    if params.k < 2 or b <= 2:
        return None
    k, P = params.k, params.poly
    js = J1(k, b, eta, P) + J2(k, b, eta, P) + J3(k, b, P)
    factor = 0.25 if cfg.mode == "mod4" else 1.0
    return factor * _s1_scale(params, N, sing) * float(js)


def main_Spi(params: SieveParams, N: int, sing: float) -> float | None:
    if params.k < 2:
        return None
    return _s1_scale(params, N, sing) * float(J_varpi(params.k, params.poly))


def _ratio(exact: float, main: float | None) -> float | None:
    return exact / main if main else None


def _report(kind, params, N, value, main, sing, exact, components=None) -> SumReport:
    fv = float(value)
    return SumReport(kind, N, params.R, params.k, fv, main, _ratio(fv, main), sing,
                     value if exact else None, components or {})


def _sing(params: SieveParams) -> float:
    return singular_series(params.tuple).value


# ---- public sums --------------------------------------------------------------


def S0_exact(params: SieveParams, N: int, *, exact: bool = False, table: WeightTable | None = None) -> SumReport:
    """sum_{N<n<=2N} (sum_{d | P(n)} lambda_hat_d)^2."""
    sw = _sweep(params, N, None, exact=exact, table=table)
    sing = _sing(params)
    return _report("S0", params, N, sw.s0, main_S0(params, N, sing), sing, exact)


def S1_exact(params: SieveParams, N: int, j: int, cfg: BetaConfig, *, exact: bool = False,
             table: WeightTable | None = None) -> SumReport:
    """sum beta(L_j(n)) (sum lambda_hat_d)^2; ``j`` is 0-based."""
    _check_form(params, j)
    sw = _sweep(params, N, cfg, exact=exact, table=table)
    sing = _sing(params)
    return _report(f"S1[{j}]", params, N, sw.s1[j], main_S1(params, N, cfg, sing), sing, exact,
                   {"beta_count": sw.beta_counts[j]})


def Spi_exact(params: SieveParams, N: int, j: int, *, exact: bool = False, table: WeightTable | None = None) -> SumReport:
    """sum over n with L_j(n) prime of (sum lambda_hat_d)^2."""
    _check_form(params, j)
    sw = _sweep(params, N, None, exact=exact, table=table)
    sing = _sing(params)
    return _report(f"Spi[{j}]", params, N, sw.spi[j], main_Spi(params, N, sing), sing, exact)


def S_combined(params: SieveParams, N: int, nu: int, cfg: BetaConfig, with_primes: bool = False, *,
               exact: bool = False, table: WeightTable | None = None) -> tuple[SumReport, list[Winner]]:
    """sum_j S1_j - nu S0 (plus the prime sums in tilde mode) and the list of detected n.

    A winner is an n where at least nu+1 of the form values are beta-numbers
    (beta-or-prime in tilde mode).
    """
    if nu < 0:
        raise PreconditionError("nu must be nonnegative")
    sw = _sweep(params, N, cfg, exact=exact, table=table, nu=nu, tilde=with_primes)
    parts = list(sw.s1)
    if with_primes:
        parts = [a + b for a, b in zip(parts, sw.spi)]
    value = sum(parts, Fraction(0) if exact else 0.0) - nu * sw.s0
    sing = _sing(params)
    m0 = main_S0(params, N, sing)
    m1 = main_S1(params, N, cfg, sing)
    main = None
    if m1 is not None:
        mp = main_Spi(params, N, sing) if with_primes else 0.0
        main = params.k * (m1 + mp) - nu * m0
    comps = {
        "S0": float(sw.s0),
        "S1": [float(v) for v in sw.s1],
        "Spi": [float(v) for v in sw.spi] if with_primes else None,
        "nu": nu,
        "with_primes": with_primes,
        "winner_count": len(sw.winners),
    }
    return _report("S", params, N, value, main, sing, exact, comps), sw.winners


def winners_csv(winners: list[Winner]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf)
    out.writerow(["n", "source_n", "which_forms", "factorizations"])
    for w in winners:
        out.writerow([w.n, w.source_n, " ".join(map(str, w.forms)), " ".join(w.factorizations())])
    return buf.getvalue()


def M_count(params: SieveParams, j: int, u: int, N: int, cfg: BetaConfig) -> int:
    """#{N < n <= 2N : u | P(n), beta(L_j(n)) = 1}."""
    _check_form(params, j)
    nt = params.tuple
    roots = roots_mod(nt, u)
    if any(p >= params.R for p in factorize(u)):
        raise PreconditionError("prime factors of u must lie below R")
    if cfg.N != N:
        raise PreconditionError("beta configuration must use the same N as the count")
    if N > N_GUARD:
        raise ResourceGuardError(f"N = {N} exceeds guard {N_GUARD}")
    f = nt.forms[j]
    total = 0
    primes = _sieve_primes_for(f.a * 2 * N + f.b)
    for lo in range(N + 1, 2 * N + 1, SEGMENT):
        hi = min(lo + SEGMENT, 2 * N + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        div = np.isin(ns % u, roots)
        om, big, least = factor_progression(f.a, f.b, lo, hi - lo, primes)
        total += int(np.count_nonzero(div & beta_mask(FactorTable(lo, hi, om, big, least, f.a, f.b), cfg)))
    return total


def _check_form(params: SieveParams, j: int) -> None:
    if not 0 <= j < params.k:
        raise PreconditionError(f"form index {j} outside 0..{params.k - 1}")
