"""Hot loops, each in a numba and a pure-numpy flavour.

The public names dispatch on ``_accel.USE_NUMBA``; the ``*_numba`` and
``*_numpy`` variants stay importable so tests and the benchmark can compare
them directly.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------------------
# factoring the values a*n + b for n in [n0, n0 + count)
# ---------------------------------------------------------------------------


@njit
def _inv_mod(a, p):
    t, new_t, r, new_r = 0, 1, p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit
def _factor_progression_kernel(a, b, n0, count, primes):
    rem = np.empty(count, dtype=np.int64)
    for i in range(count):
        rem[i] = a * (n0 + i) + b
    omega = np.zeros(count, dtype=np.int8)
    big = np.zeros(count, dtype=np.int8)
    least = np.zeros(count, dtype=np.int64)
    for t in range(primes.shape[0]):
        p = primes[t]
        ap = a % p
        bp = b % p
        # p | a and p | b: every value is divisible, so visit them all
        step = p
        if ap == 0:
            if bp != 0:
                continue
            start = 0
            step = 1
        else:
            start = ((-bp * _inv_mod(ap, p) - n0) % p + p) % p
        for i in range(start, count, step):
            r = rem[i]
            if least[i] == 0:
                least[i] = p
            omega[i] += 1
            while r % p == 0:
                r //= p
                big[i] += 1
            rem[i] = r
    for i in range(count):
        if rem[i] > 1:
            omega[i] += 1
            big[i] += 1
            if least[i] == 0:
                least[i] = rem[i]
    return omega, big, least


def factor_progression_numba(a, b, n0, count, primes):
    return _factor_progression_kernel(
        np.int64(a), np.int64(b), np.int64(n0), np.int64(count), np.asarray(primes, dtype=np.int64)
    )


def factor_progression_numpy(a, b, n0, count, primes):
    rem = a * (np.int64(n0) + np.arange(count, dtype=np.int64)) + b
    omega = np.zeros(count, dtype=np.int8)
    big = np.zeros(count, dtype=np.int8)
    least = np.zeros(count, dtype=np.int64)
    for p in np.asarray(primes, dtype=np.int64).tolist():
        ap, bp = a % p, b % p
        step = p
        if ap == 0:
            if bp:
                continue
            start, step = 0, 1
        else:
            start = (-bp * pow(ap, -1, p) - n0) % p
        if start >= count:
            continue
        sl = slice(start, None, step)
        sub = rem[sl]
        omega[sl] += 1
        ls = least[sl]
        least[sl] = np.where(ls == 0, p, ls)
        e = np.zeros(sub.shape[0], dtype=np.int8)
        hit = np.ones(sub.shape[0], dtype=bool)
        while hit.any():
            hit = sub % p == 0
            sub = np.where(hit, sub // p, sub)
            e += hit
        big[sl] += e
        rem[sl] = sub
    tail = rem > 1
    omega += tail
    big += tail
    least = np.where((least == 0) & tail, rem, least)
    return omega, big, least


def factor_progression(a, b, n0, count, primes):
    """(omega, Omega, least prime factor) of a*n + b for n in [n0, n0+count).

    ``primes`` must contain every prime up to sqrt of the largest value.
    A value of 1 gets least factor 0.
    """
    if _accel.USE_NUMBA:
        return factor_progression_numba(a, b, n0, count, primes)
    return factor_progression_numpy(a, b, n0, count, primes)


# ---------------------------------------------------------------------------
# adding weights along arithmetic progressions
# ---------------------------------------------------------------------------


@njit
def _accumulate_kernel(acc, n0, residues, moduli, weights):
    count = acc.shape[0]
    for j in range(residues.shape[0]):
        d = moduli[j]
        start = ((residues[j] - n0) % d + d) % d
        w = weights[j]
        for i in range(start, count, d):
            acc[i] += w


def accumulate_numba(acc, n0, residues, moduli, weights):
    _accumulate_kernel(
        acc,
        np.int64(n0),
        np.asarray(residues, dtype=np.int64),
        np.asarray(moduli, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
    )


def accumulate_numpy(acc, n0, residues, moduli, weights):
    # also serves object arrays (exact integer weights)
    for r, d, w in zip(residues, moduli, weights):
        d = int(d)
        acc[(int(r) - n0) % d :: d] += w


def accumulate(acc, n0, residues, moduli, weights):
    """acc[i] += w for every progression n = r (mod d), n = n0 + i."""
    if _accel.USE_NUMBA and acc.dtype == np.float64:
        accumulate_numba(acc, n0, residues, moduli, weights)
    else:
        accumulate_numpy(acc, n0, residues, moduli, weights)


# ---------------------------------------------------------------------------
# sums over multiples: out[d] = sum_{j >= 1} w[d j]
# ---------------------------------------------------------------------------


@njit
def _multiple_sums_kernel(w):
    n = w.shape[0]
    out = np.zeros(n, dtype=np.float64)
    for d in range(1, n):
        s = 0.0
        c = 0.0
        for m in range(d, n, d):
            y = w[m] - c
            t = s + y
            c = (t - s) - y
            s = t
        out[d] = s
    return out


def multiple_sums_numba(w):
    return _multiple_sums_kernel(np.asarray(w, dtype=np.float64))


def multiple_sums_numpy(w):
    w = np.asarray(w, dtype=np.float64)
    out = np.zeros_like(w)
    for d in range(1, w.shape[0]):
        out[d] = w[d::d].sum()
    return out


def multiple_sums(w):
    if _accel.USE_NUMBA:
        return multiple_sums_numba(w)
    return multiple_sums_numpy(w)


# ---------------------------------------------------------------------------
# squarefree-supported multiplicative function from prime values
# ---------------------------------------------------------------------------


@njit
def _multiplicative_kernel(z, primes, gp):
    out = np.ones(z, dtype=np.float64)
    out[0] = 0.0
    for t in range(primes.shape[0]):
        p = primes[t]
        g = gp[t]
        for m in range(p, z, p):
            out[m] *= g
        pp = p * p
        for m in range(pp, z, pp):
            out[m] = 0.0
    return out


def multiplicative_numba(z, primes, gp):
    return _multiplicative_kernel(np.int64(z), np.asarray(primes, dtype=np.int64), np.asarray(gp, dtype=np.float64))


def multiplicative_numpy(z, primes, gp):
    out = np.ones(z, dtype=np.float64)
    out[0] = 0.0
    for p, g in zip(np.asarray(primes).tolist(), np.asarray(gp, dtype=np.float64).tolist()):
        out[p::p] *= g
        out[p * p :: p * p] = 0.0
    return out


def multiplicative(z, primes, gp):
    """Array over d < z of mu^2(d) prod_{p|d} g(p); ``primes`` must cover all p < z."""
    if _accel.USE_NUMBA:
        return multiplicative_numba(z, primes, gp)
    return multiplicative_numpy(z, primes, gp)


# ---------------------------------------------------------------------------
# residue-class prefix counts
# ---------------------------------------------------------------------------


@njit
def _class_counts_kernel(values, q, thresholds):
    out = np.zeros((thresholds.shape[0], q), dtype=np.int64)
    cur = np.zeros(q, dtype=np.int64)
    i = 0
    n = values.shape[0]
    for j in range(thresholds.shape[0]):
        t = thresholds[j]
        while i < n and values[i] <= t:
            cur[values[i] % q] += 1
            i += 1
        out[j, :] = cur
    return out


def class_counts_numba(values, q, thresholds):
    return _class_counts_kernel(np.asarray(values, dtype=np.int64), np.int64(q), np.asarray(thresholds, dtype=np.int64))


def class_counts_numpy(values, q, thresholds):
    values = np.asarray(values, dtype=np.int64)
    idx = np.searchsorted(values, np.asarray(thresholds, dtype=np.int64), side="right")
    out = np.zeros((len(idx), q), dtype=np.int64)
    prev = 0
    cur = np.zeros(q, dtype=np.int64)
    for j, i in enumerate(idx.tolist()):
        if i > prev:
            cur = cur + np.bincount(values[prev:i] % q, minlength=q)
            prev = i
        out[j] = cur
    return out


def class_counts(values, q, thresholds):
    """out[j, a] = #{v in values : v <= thresholds[j], v = a mod q}; both inputs sorted."""
    if _accel.USE_NUMBA:
        return class_counts_numba(values, q, thresholds)
    return class_counts_numpy(values, q, thresholds)


IMPLEMENTATIONS = {
    "numba": {
        "factor_progression": factor_progression_numba,
        "accumulate": accumulate_numba,
        "multiple_sums": multiple_sums_numba,
        "multiplicative": multiplicative_numba,
        "class_counts": class_counts_numba,
    },
    "numpy": {
        "factor_progression": factor_progression_numpy,
        "accumulate": accumulate_numpy,
        "multiple_sums": multiple_sums_numpy,
        "multiplicative": multiplicative_numpy,
        "class_counts": class_counts_numpy,
    },
}
