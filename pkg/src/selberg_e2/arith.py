"""Small-integer arithmetic helpers: prime lists, factoring, Moebius, CRT."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def primes_up_to(limit: int) -> np.ndarray:
    """All primes p <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> tuple[int, ...]:
    return tuple(int(p) for p in primes_up_to(limit))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in _small_primes(1 << 16):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    else:
        p = (1 << 16) + 1
        while p * p <= n:
            while n % p == 0:
                n //= p
                out[p] = out.get(p, 0) + 1
            p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorize(n)) if n > 1 else []


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def radical(n: int) -> int:
    return math.prod(factorize(n)) if n > 1 else 1


def squarefree_coprime_upto(bound: float, modulus: int) -> list[int]:
    """Squarefree d < bound with gcd(d, modulus) == 1, ascending."""
    top = math.ceil(bound)
    if top <= 1:
        return []
    ok = np.ones(top, dtype=bool)
    ok[0] = False
    for p in primes_up_to(top - 1):
        p = int(p)
        if modulus % p == 0:
            ok[p::p] = False
        elif p * p < top:
            ok[p * p :: p * p] = False
    return [int(d) for d in np.flatnonzero(ok) if d < bound]


def crt(residues: list[int], moduli: list[int]) -> int:
    """Smallest nonnegative x with x = r_i mod m_i for pairwise coprime m_i."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x % m


def nth_primes(start: int, count: int) -> list[int]:
    """Primes p_start, ..., p_{start+count-1} (1-based: p_1 = 2)."""
    limit = 64
    while True:
        ps = primes_up_to(limit)
        if len(ps) >= start + count - 1:
            return [int(p) for p in ps[start - 1 : start - 1 + count]]
        limit *= 2


def prime_pi(x: int) -> int:
    return int(len(primes_up_to(int(x))))
