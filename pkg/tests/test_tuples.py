import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selberg_e2.arith import crt, factorize, is_prime, primes_up_to, squarefree_coprime_upto
from selberg_e2.errors import InadmissibleError, PreconditionError
from selberg_e2.tuples import (LinearForm, LinearTuple, constant_A, is_admissible, normalize, nu_p,
                               raw_singular_series, roots_mod, singular_series, tuple_report)


def test_nu_p_examples():
    t = LinearTuple.parse("n,n+2,n+6")
    assert nu_p(t, 2) == 1
    assert nu_p(t, 3) == 2
    assert nu_p(LinearTuple.parse("n,n+1"), 2) == 2


def test_admissibility():
    assert is_admissible(LinearTuple.parse("n,n+2,n+6"))
    assert not is_admissible(LinearTuple.parse("n,n+2,n+4"))
    assert not is_admissible(LinearTuple.parse("n,n+1"))


def test_constant_A():
    assert constant_A(LinearTuple.parse("n,n+2")) == 2
    assert constant_A(LinearTuple.parse("n,n+2,n+6")) == 48
    assert constant_A(LinearTuple.parse("2n+1,2n+3")) == 16


def test_repeated_and_proportional_forms_rejected():
    with pytest.raises(PreconditionError):
        LinearTuple.parse("n+1,n+1")
    with pytest.raises(PreconditionError):
        LinearTuple.parse("n,2*n")
    with pytest.raises(PreconditionError):
        LinearForm(0, 3)


def test_parse_variants():
    t = LinearTuple.parse("2*n+1, 2n+3, n-3, n")
    assert [(f.a, f.b) for f in t.forms] == [(2, 1), (2, 3), (1, -3), (1, 0)]
    assert str(t) == "2*n+1,2*n+3,n-3,n"


def test_normalize_pair():
    nt = normalize(LinearTuple.parse("n,n+2"))
    assert [(f.a, f.b) for f in nt.forms] == [(2, 1), (2, 3)]
    assert (nt.scale, nt.shift) == (2, 1)
    assert nt.A == 4  # product of the new slopes


def test_normalize_triple_hypothesis():
    nt = normalize(LinearTuple.parse("n,n+2,n+6"))
    assert len({f.a for f in nt.forms}) == 1
    for p in primes_up_to(10**4).tolist():
        want = 0 if nt.A % p == 0 else 3
        assert nu_p(nt.tuple, p) == want if p < 60 else True
    assert nu_p(nt.tuple, 2) == nu_p(nt.tuple, 3) == 0
    for p in primes_up_to(3).tolist():
        assert nt.A % p == 0


def test_normalize_is_stable_on_normalized_input():
    nt = normalize(LinearTuple.parse("n,n+2"))
    again = normalize(nt.tuple)
    assert again.k == 2
    assert nu_p(again.tuple, 2) == 0 and nu_p(again.tuple, 5) == 2


def test_normalize_rejects_inadmissible():
    with pytest.raises(InadmissibleError):
        normalize(LinearTuple.parse("n,n+2,n+4"))


def test_singular_series_values():
    # independent oracle: plain Python Euler product to 10^6
    nt = normalize(LinearTuple.parse("n,n+2"))
    s = singular_series(nt)
    oracle = 4.0
    for p in primes_up_to(10**6).tolist()[1:]:
        oracle *= (1 - 2 / p) / (1 - 1 / p) ** 2
    assert s.value == pytest.approx(oracle, rel=1e-12)
    assert s.value == pytest.approx(2.640646, abs=2e-5)
    raw = raw_singular_series(LinearTuple.parse("n,n+2"))
    assert raw.value == pytest.approx(1.320324, abs=1e-5)
    assert abs(s.value - 2.6406472634) <= s.error_bound + 1e-9  # 4 * twin prime constant


def test_singular_series_k1_and_cutoff():
    nt = normalize(LinearTuple.parse("n+1"))
    s = singular_series(nt, 1000)
    assert s.value == 1.0 and s.error_bound == 0.0
    with pytest.raises(PreconditionError):
        singular_series(normalize(LinearTuple.parse("n,n+2,n+6")), 2)


def test_admissible_iff_positive_series():
    for text in ("n,n+2,n+6", "n,n+4,n+6", "n,n+2,n+4", "n,n+1", "n,n+2,n+6,n+8"):
        t = LinearTuple.parse(text)
        s = raw_singular_series(t, 10**5)
        assert is_admissible(t) == (s.value - s.error_bound > 0)


def test_roots_mod(pair):
    assert roots_mod(pair, 3) == [0, 1]
    assert roots_mod(pair, 1) == [0]
    r15 = roots_mod(pair, 15)
    assert r15 == [n for n in range(15) if math.prod(f(n) for f in pair.forms) % 15 == 0]
    assert len(r15) == 4
    with pytest.raises(PreconditionError):
        roots_mod(pair, 9)
    with pytest.raises(PreconditionError):
        roots_mod(pair, 2)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(squarefree_coprime_upto(400, 6)), st.sampled_from(squarefree_coprime_upto(400, 6)))
def test_roots_multiplicative(d, e):
    nt = normalize(LinearTuple.parse("n,n+2,n+6"))
    if math.gcd(d, e) != 1:
        return
    assert len(roots_mod(nt, d * e)) == len(roots_mod(nt, d)) * len(roots_mod(nt, e))
    assert len(roots_mod(nt, d)) == 3 ** len(factorize(d))


def test_report_shape():
    rep = tuple_report(LinearTuple.parse("n,n+2,n+6"), 10**4)
    assert rep["A"] == 48 and rep["admissible"]
    assert set(rep["singular_series"]["normalized"]) == {"value", "error", "cutoff"}


def test_arith_helpers():
    assert crt([1, 2], [3, 5]) == 7
    assert is_prime(10**9 + 7) and not is_prime(10**9 + 9 * 7)
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
