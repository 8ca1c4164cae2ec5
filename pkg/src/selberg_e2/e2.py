"""Factor tables and the E2 stream (products of two distinct primes)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .arith import primes_up_to
from .errors import PreconditionError, ResourceGuardError
from .kernels import factor_progression

SEGMENT = 1 << 20
MEMORY_GUARD = 10**8


@dataclass
class FactorTable:
    """omega, Omega and least prime factor for the values a*n + b, n in [lo, hi).

    With the default a=1, b=0 the values are the integers lo..hi-1 themselves.
    """

    lo: int
    hi: int
    omega: np.ndarray
    big_omega: np.ndarray
    least_factor: np.ndarray
    a: int = 1
    b: int = 0

    def index(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise PreconditionError(f"{n} outside table range [{self.lo}, {self.hi})")
        return n - self.lo

    def value(self, n: int) -> int:
        return self.a * n + self.b

    def values(self) -> np.ndarray:
        return self.a * np.arange(self.lo, self.hi, dtype=np.int64) + self.b

    def is_prime_mask(self) -> np.ndarray:
        return self.big_omega == 1

    def e2_mask(self, allow_squares: bool = False) -> np.ndarray:
        if allow_squares:
            return self.big_omega == 2
        return (self.big_omega == 2) & (self.omega == 2)


def _sieve_primes_for(max_value: int) -> np.ndarray:
    return primes_up_to(math.isqrt(max(int(max_value), 4)) + 1)


def build_factor_table(lo: int, hi: int, *, a: int = 1, b: int = 0, guard: int = MEMORY_GUARD) -> FactorTable:
    """Exact omega/Omega/least factor over [lo, hi) by sieving with primes up to the square root."""
    if hi - lo > guard:
        raise ResourceGuardError(f"table of {hi - lo} entries exceeds guard {guard}")
    if a * lo + b < 1:
        raise PreconditionError("values must be positive")
    count = max(hi - lo, 0)
    primes = _sieve_primes_for(a * (hi - 1) + b)
    om, big, least = factor_progression(a, b, lo, count, primes)
    return FactorTable(lo, hi, om, big, least, a, b)


@dataclass(frozen=True)
class E2Options:
    min_factor: int = 0
    mod4: bool = False
    allow_squares: bool = False


def _segment_e2(lo: int, hi: int, opts: E2Options, primes: np.ndarray):
    om, big, least = factor_progression(1, 0, lo, hi - lo, primes)
    mask = (big == 2) if opts.allow_squares else ((big == 2) & (om == 2))
    idx = np.flatnonzero(mask)
    ns = lo + idx.astype(np.int64)
    p1 = least[idx]
    p2 = ns // p1
    keep = p1 > opts.min_factor
    if opts.mod4:
        keep &= (p1 % 4 == 1) & (p2 % 4 == 1)
    return ns[keep], p1[keep], p2[keep]


def e2_arrays(limit: int, opts: E2Options = E2Options(), segment: int = SEGMENT):
    """All E2-numbers n <= limit with their factors, as three int64 arrays."""
    if limit > 50 * MEMORY_GUARD:
        raise ResourceGuardError(f"limit {limit} exceeds guard")
    primes = _sieve_primes_for(limit)
    parts = [], [], []
    for lo in range(2, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        for acc, arr in zip(parts, _segment_e2(lo, hi, opts, primes)):
            acc.append(arr)
    if not parts[0]:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    return tuple(np.concatenate(p) for p in parts)


def e2_stream(limit: int, opts: E2Options = E2Options()) -> Iterator[tuple[int, int, int]]:
    """Yield (n, p1, p2) in increasing n."""
    ns, p1, p2 = e2_arrays(limit, opts)
    for n, a, b in zip(ns.tolist(), p1.tolist(), p2.tolist()):
        yield n, a, b


@dataclass
class GapReport:
    limit: int
    count: int
    histogram: dict[int, int]
    instances: dict[int, list[int]] = field(default_factory=dict)
    blocks: dict | None = None
    small_gap_count: int = 0
    first: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "limit": self.limit,
            "count": self.count,
            "first": self.first,
            "histogram": {str(g): c for g, c in sorted(self.histogram.items())},
            "instances": {str(g): v for g, v in self.instances.items()},
            "blocks": self.blocks,
            "gaps_le_6": self.small_gap_count,
        }


def e2_gaps(
    limit: int,
    opts: E2Options = E2Options(),
    *,
    instances_for: tuple[int, ...] = (),
    max_instances: int = 100,
    block_nu: int | None = None,
    block_window: int | None = None,
) -> GapReport:
    """Histogram of consecutive E2 gaps up to ``limit`` plus optional instance lists.

    ``block_nu``/``block_window`` count the m with q_{m+nu} - q_m <= window.
    """
    ns, _, _ = e2_arrays(limit, opts)
    gaps = np.diff(ns)
    values, counts = np.unique(gaps, return_counts=True)
    rep = GapReport(
        limit,
        int(ns.size),
        {int(v): int(c) for v, c in zip(values, counts)},
        first=ns[:20].tolist(),
        small_gap_count=int(np.count_nonzero(gaps <= 6)),
    )
    for g in instances_for:
        hits = np.flatnonzero(gaps == g)[:max_instances]
        rep.instances[g] = ns[hits].tolist()
    if block_nu is not None:
        if block_nu < 1:
            raise PreconditionError("block size must be >= 1")
        spans = ns[block_nu:] - ns[:-block_nu] if ns.size > block_nu else np.zeros(0, dtype=np.int64)
        window = block_window if block_window is not None else int(spans.min()) if spans.size else 0
        rep.blocks = {
            "nu": block_nu,
            "window": window,
            "count": int(np.count_nonzero(spans <= window)),
            "min_span": int(spans.min()) if spans.size else None,
        }
    return rep


def find_patterns(limit: int, shifts: tuple[int, ...], opts: E2Options = E2Options(), max_hits: int = 100) -> list[int]:
    """n <= limit with n + h an E2-number for every h in shifts."""
    top = limit + max(shifts)
    ns, _, _ = e2_arrays(top, opts)
    is_e2 = np.zeros(top + 1, dtype=bool)
    is_e2[ns] = True
    base = np.arange(0, limit + 1)
    mask = np.ones(limit + 1, dtype=bool)
    for h in shifts:
        mask &= is_e2[base + h]
    return np.flatnonzero(mask)[:max_hits].tolist()


# ---------------------------------------------------------------------------
# beta and the counting functions over (x, 2x]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaConfig:
    """beta(n) = 1 iff n = p1 p2 with Y < p1 <= sqrt(N) < p2 (both 1 mod 4 in mod4 mode)."""

    N: int
    Y: float = 1
    mode: str = "plain"

    def __post_init__(self):
        if self.mode not in ("plain", "mod4"):
            raise PreconditionError(f"unknown beta mode {self.mode!r}")
        if self.N < 1:
            raise PreconditionError("N must be positive")
        if not 1 <= self.Y <= self.N**0.25 + 1e-9:
            raise PreconditionError("need 1 <= Y <= N^(1/4)")


def beta_mask(table: FactorTable, cfg: BetaConfig) -> np.ndarray:
    """beta over all values in ``table``."""
    vals = table.values()
    p1 = table.least_factor
    safe = np.where(p1 > 0, p1, 1)
    p2 = vals // safe
    mask = (table.big_omega == 2) & (table.omega == 2)
    mask &= (p1 > cfg.Y) & (p1 * p1 <= cfg.N) & (p2 * p2 > cfg.N)
    if cfg.mode == "mod4":
        mask &= (p1 % 4 == 1) & (p2 % 4 == 1)
    return mask


def beta(n: int, cfg: BetaConfig, factors: FactorTable) -> int:
    i = factors.index(n)
    sub = FactorTable(n, n + 1, factors.omega[i : i + 1], factors.big_omega[i : i + 1], factors.least_factor[i : i + 1], factors.a, factors.b)
    return int(beta_mask(sub, cfg)[0])


def pi_flat(x: int, q: int = 1, a: int = 0, table: FactorTable | None = None) -> int:
    """Primes p in (x, 2x] with p = a mod q."""
    table = table or build_factor_table(x + 1, 2 * x + 1)
    if table.lo > x + 1 or table.hi < 2 * x + 1:
        raise PreconditionError("factor table does not cover (x, 2x]")
    sl = slice(x + 1 - table.lo, 2 * x + 1 - table.lo)
    vals = table.values()[sl]
    return int(np.count_nonzero(table.is_prime_mask()[sl] & (vals % q == a % q)))


def pi_beta(x: int, q: int, a: int, cfg: BetaConfig, table: FactorTable | None = None) -> int:
    """sum over x < n <= 2x, n = a mod q of beta(n)."""
    table = table or build_factor_table(x + 1, 2 * x + 1)
    if table.lo > x + 1 or table.hi < 2 * x + 1:
        raise PreconditionError("factor table does not cover (x, 2x]")
    sl = slice(x + 1 - table.lo, 2 * x + 1 - table.lo)
    vals = table.values()[sl]
    return int(np.count_nonzero(beta_mask(table, cfg)[sl] & (vals % q == a % q)))
