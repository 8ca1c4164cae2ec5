"""Slow reference implementations shared by the test modules."""
from fractions import Fraction
import math

import numpy as np


def spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def factor(n: int, spf) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


def is_beta(v: int, spf, N: int, Y: float = 1, mod4: bool = False) -> bool:
    f = factor(v, spf)
    if sorted(f.values()) != [1, 1]:
        return False
    p1, p2 = sorted(f)
    ok = p1 > Y and p1 * p1 <= N < p2 * p2
    return ok and (not mod4 or (p1 % 4 == 1 and p2 % 4 == 1))


def is_prime(v: int, spf) -> bool:
    return v > 1 and int(spf[v]) == v


def brute_all(nt, table, N: int, Y: float = 1, mod4: bool = False, us: tuple[int, ...] = ()):
    """Per-n divisor enumeration over N < n <= 2N.

    Returns S0, S1[j], Spi[j] as exact rationals and M[(j, u)] as counts.  The
    weights are scaled to one integer denominator so the inner loop stays in
    integer arithmetic.
    """
    lam = [(d, Fraction(v)) for d, v in sorted(table.lambda_hat.items()) if v]
    D = math.lcm(*(v.denominator for _, v in lam)) if lam else 1
    ilam = [(d, v.numerator * (D // v.denominator)) for d, v in lam]
    spf = spf_table(max(f.a * 2 * N + f.b for f in nt.forms))
    s0 = 0
    s1 = [0] * nt.k
    spi = [0] * nt.k
    M = {(j, u): 0 for j in range(nt.k) for u in us}
    for n in range(N + 1, 2 * N + 1):
        vals = [f.a * n + f.b for f in nt.forms]
        prod = math.prod(vals)
        w = sum(v for d, v in ilam if prod % d == 0)
        sq = w * w
        s0 += sq
        for j, v in enumerate(vals):
            b = is_beta(v, spf, N, Y, mod4)
            if b:
                s1[j] += sq
                for u in us:
                    if prod % u == 0:
                        M[(j, u)] += 1
            if is_prime(v, spf):
                spi[j] += sq
    scale = D * D
    return Fraction(s0, scale), [Fraction(s, scale) for s in s1], [Fraction(s, scale) for s in spi], M


def brute_sums(nt, table, N: int, Y: float = 1, mod4: bool = False):
    s0, s1, spi, _ = brute_all(nt, table, N, Y, mod4)
    return s0, s1, spi


def brute_M(nt, j: int, u: int, N: int, Y: float = 1) -> int:
    f = nt.forms[j]
    spf = spf_table(f.a * 2 * N + f.b)
    return sum(
        1 for n in range(N + 1, 2 * N + 1)
        if math.prod(g.a * n + g.b for g in nt.forms) % u == 0 and is_beta(f.a * n + f.b, spf, N, Y)
    )
