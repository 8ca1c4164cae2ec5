import pytest

from _oracle import factor, spf_table
from selberg_e2.e2 import (BetaConfig, E2Options, beta, build_factor_table, e2_arrays, e2_gaps, e2_stream,
                           find_patterns, pi_beta, pi_flat)
from selberg_e2.errors import PreconditionError, ResourceGuardError

SMALL_E2 = [6, 10, 14, 15, 21, 22, 26, 33, 34, 35, 38, 39]


def test_factor_table_small():
    t = build_factor_table(2, 20)
    spf = spf_table(20)
    for n in range(2, 20):
        f = factor(n, spf)
        i = t.index(n)
        assert t.omega[i] == len(f) and t.big_omega[i] == sum(f.values()) and t.least_factor[i] == min(f)
    one = build_factor_table(1, 2)
    assert one.omega[0] == 0 and one.big_omega[0] == 0 and one.least_factor[0] == 0
    with pytest.raises(PreconditionError):
        t.index(20)


def test_factor_table_progression():
    t = build_factor_table(1, 500, a=6, b=5)
    spf = spf_table(6 * 500 + 5)
    for n in range(1, 500):
        f = factor(6 * n + 5, spf)
        assert t.big_omega[n - 1] == sum(f.values()) and t.least_factor[n - 1] == min(f)


def test_stream_small():
    assert [n for n, _, _ in e2_stream(40)] == SMALL_E2
    assert all(p * q == n and p < q for n, p, q in e2_stream(40))
    assert list(e2_stream(40, E2Options(min_factor=40))) == []
    assert [n for n, _, _ in e2_stream(40, E2Options(allow_squares=True))] == sorted(SMALL_E2 + [4, 9, 25])
    assert [n for n, _, _ in e2_stream(100, E2Options(mod4=True))] == [65, 85]


def test_stream_matches_trial_division():
    spf = spf_table(10**4)
    expect = [n for n in range(2, 10**4 + 1) if sorted(factor(n, spf).values()) == [1, 1]]
    ns, _, _ = e2_arrays(10**4, segment=777)
    assert ns.tolist() == expect


def test_gaps_and_patterns():
    rep = e2_gaps(1000, instances_for=(1,), block_nu=2)
    assert sum(rep.histogram.values()) == rep.count - 1
    assert rep.instances[1][:3] == [14, 21, 33]
    assert rep.blocks["min_span"] == 2  # 33, 34, 35
    assert find_patterns(100, (0, 2, 6)) == [33, 85]
    assert rep.to_json()["gaps_le_6"] == rep.small_gap_count


def test_beta_and_counts():
    t = build_factor_table(1, 200)
    assert beta(6, BetaConfig(4), t) == 1
    assert beta(6, BetaConfig(9), t) == 0
    big = build_factor_table(14000, 14050)
    assert beta(14021, BetaConfig(10**4, 5), big) == 1  # 7 * 2003
    assert beta(14021, BetaConfig(10**4, 7), big) == 0
    assert pi_flat(10) == 4
    assert pi_flat(10, 3, 1) == 2  # 13, 19


def test_class_sum_identity():
    x, cfg = 5000, BetaConfig(5000)
    table = build_factor_table(x + 1, 2 * x + 1)
    total = pi_beta(x, 1, 0, cfg, table)
    for q in (3, 4, 7, 30):
        assert sum(pi_beta(x, q, a, cfg, table) for a in range(q)) == total
        assert sum(pi_flat(x, q, a, table) for a in range(q)) == pi_flat(x, 1, 0, table)


def test_guards():
    with pytest.raises(ResourceGuardError):
        build_factor_table(1, 10**9)
    with pytest.raises(PreconditionError):
        BetaConfig(100, 10)
    with pytest.raises(PreconditionError):
        pi_flat(100, table=build_factor_table(1, 50))
