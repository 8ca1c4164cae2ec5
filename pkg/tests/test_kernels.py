import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selberg_e2.arith import factorize, primes_up_to
from selberg_e2.kernels import IMPLEMENTATIONS

FAST, SLOW = IMPLEMENTATIONS["numba"], IMPLEMENTATIONS["numpy"]


def _brute_factor(v):
    if v == 1:
        return 0, 0, 0
    f = factorize(v)
    return len(f), sum(f.values()), min(f)


@settings(max_examples=40, deadline=None)
@given(a=st.integers(1, 60), b=st.integers(-5, 80), n0=st.integers(1, 3000), count=st.integers(1, 400))
def test_factor_progression_matches_trial_division(a, b, n0, count):
    if a * n0 + b < 1:
        return
    primes = primes_up_to(int((a * (n0 + count) + b) ** 0.5) + 2)
    for impl in (FAST, SLOW):
        om, big, least = impl["factor_progression"](a, b, n0, count, primes)
        for i in range(0, count, max(1, count // 25)):
            assert (om[i], big[i], least[i]) == _brute_factor(a * (n0 + i) + b)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 500), st.integers(1, 60), st.floats(-5, 5)), min_size=1, max_size=40),
       st.integers(0, 1000))
def test_accumulate_paths_agree(progs, n0):
    res = np.array([r % d for r, d, _ in progs])
    mods = np.array([d for _, d, _ in progs])
    wts = np.array([w for _, _, w in progs])
    a, b = np.zeros(700), np.zeros(700)
    FAST["accumulate"](a, n0, res, mods, wts)
    SLOW["accumulate"](b, n0, res, mods, wts)
    assert np.allclose(a, b)
    n = n0 + 17
    assert b[17] == pytest.approx(sum(w for r, d, w in progs if n % d == r % d), abs=1e-9)


def test_accumulate_object_arrays_are_exact():
    acc = np.zeros(30, dtype=object)
    acc[:] = 0
    SLOW["accumulate"](acc, 10, [1, 0], [3, 5], [10**30, 7])
    assert acc[0] == 10**30 + 7  # n = 10: 1 mod 3 and 0 mod 5
    assert acc[3] == 10**30  # n = 13
    assert acc[5] == 7  # n = 15
    assert acc[2] == 0  # n = 12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=300))
def test_multiple_sums_paths_agree(w):
    w = np.array(w)
    fast, slow = FAST["multiple_sums"](w), SLOW["multiple_sums"](w)
    assert np.allclose(fast, slow, atol=1e-9)
    assert fast[1] == pytest.approx(w[1:].sum(), abs=1e-9)


def test_multiplicative_is_squarefree_supported():
    ps = primes_up_to(100)
    for impl in (FAST, SLOW):
        out = impl["multiplicative"](100, ps, -np.ones(ps.size))
        assert out[30] == -1 and out[6] == 1 and out[12] == 0 and out[1] == 1 and out[0] == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 5000), min_size=1, max_size=200, unique=True), st.integers(1, 12))
def test_class_counts_paths_agree(vals, q):
    vals = np.array(sorted(vals))
    th = np.array(sorted({1, 100, 2500, 5000, int(vals[len(vals) // 2])}))
    a, b = FAST["class_counts"](vals, q, th), SLOW["class_counts"](vals, q, th)
    assert (a == b).all()
    assert a[-1].sum() == len(vals)
