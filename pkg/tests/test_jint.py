import math
from fractions import Fraction as F

import mpmath
import pytest

from selberg_e2.errors import PreconditionError
from selberg_e2.exact import ExactConstant as EC
from selberg_e2.jint import (A0_kl, A_kl, C_ell, J0, J1, J2, J3, J_total, JInputs, asymptotic_J_main,
                             beta_moment, evaluate, harmonic_L, monomial_weight)
from selberg_e2.poly import Poly

P6 = Poly.parse("1,6")
P1 = Poly.parse("1,1")


def log_(x, c):
    return EC.log_of(F(x), F(c))


def test_three_form_closed_forms():
    r = evaluate(JInputs(3, F(4), F(1, 144), P6))
    assert r.J0 == EC(F(38, 15))
    assert r.J1 == log_(F(143, 108), 4824) + EC(F(-13641020155, 10077696))
    assert r.J2 == log_(F(143, 108), F(-77824, 15)) + EC(F(14680965985, 10077696))
    assert r.J3 == log_(3, F(41, 60))
    assert r.J == log_(3, F(41, 40)) - log_(F(143, 108), F(2732, 5)) + EC(F(852438101, 5598720))
    assert float(r.J3) == pytest.approx(0.75071, abs=1e-5)


def test_two_form_closed_forms():
    r = evaluate(JInputs(2, F(4), F(1, 10), P1), with_primes=True)
    assert r.J0 == EC(F(11, 12)) and r.J_varpi == EC(F(19, 30))
    assert r.J1 == log_(F(6, 5), -144) + EC(F(66363, 2500))
    assert r.J2 == log_(F(6, 5), F(2048, 15)) + EC(F(-308429, 12500))
    assert r.J3 == log_(3, F(19, 30))
    assert r.J == log_(3, F(19, 60)) - log_(F(6, 5), F(56, 15)) + EC(F(4193, 12500))


def test_float_path_matches_exact():
    for k, B, eta, P in ((3, 4, F(1, 144), P6), (2, 4, F(1, 10), P1), (12, 60, F(0), Poly.parse("1,3,1"))):
        exact = float(J_total(JInputs(k, F(B), eta, P)))
        approx = J_total(JInputs(k, float(B), float(eta), P))
        assert approx == pytest.approx(exact, rel=1e-12, abs=1e-15)


def _quad_defs(k, B, eta, P):
    """Nested adaptive quadrature of the defining double integrals."""
    Pt = P.integral()
    pt = lambda u: sum(mpmath.mpf(c.numerator) / c.denominator * u**i for i, c in enumerate(Pt.c))
    w = lambda y: B / (y * (B - y))
    lo = B * eta
    in1 = lambda y: mpmath.quad(lambda x: (pt(1 - x) - pt(1 - x - y)) ** 2 * x ** (k - 2), [0, 1 - y])
    in2 = lambda y: mpmath.quad(lambda x: pt(1 - x) ** 2 * x ** (k - 2), [1 - y, 1])
    full = mpmath.quad(lambda x: pt(1 - x) ** 2 * x ** (k - 2), [0, 1])
    j1 = mpmath.quad(lambda y: w(y) * in1(y), [lo, 1])
    j2 = mpmath.quad(lambda y: w(y) * in2(y), [lo, 1])
    j3 = full * mpmath.quad(w, [1, B / 2])
    return j1, j2, j3


@pytest.mark.parametrize("k,B,eta,P", [
    (3, 4, F(1, 144), P6),
    (2, 4, F(1, 10), P1),
    (4, 5, F(1, 20), Poly.parse("1,0,2")),
    (3, 6, F(0), Poly.parse("2,-1")),
])
def test_quadrature_cross_check(k, B, eta, P):
    with mpmath.workdps(30):
        q1, q2, q3 = _quad_defs(k, mpmath.mpf(B), mpmath.mpf(eta.numerator) / eta.denominator, P)
        for exact, quad in ((J1(k, F(B), eta, P), q1), (J2(k, F(B), eta, P), q2), (J3(k, F(B), P), q3)):
            val = exact.numeric(30)
            assert abs(val - quad) <= 1e-10 * abs(quad)


def test_empty_range_warns():
    with pytest.warns(UserWarning):
        assert J1(3, F(4), F(1, 4), P6) == EC(0)
    with pytest.warns(UserWarning):
        assert J2(3, 4.0, 0.25, P6) == 0.0


def test_preconditions():
    with pytest.raises(PreconditionError):
        J3(3, F(2), P6)
    with pytest.raises(PreconditionError):
        JInputs(1, F(4), F(0), P6)
    with pytest.raises(PreconditionError):
        JInputs(3, F(4), F(-1), P6)
    with pytest.raises(PreconditionError):
        J0(3, Poly.monomial(33))


def test_zero_poly_and_huge_nu():
    assert J0(2, Poly()) == EC(0)
    assert J_total(JInputs(3, F(4), F(1, 144), P6, nu=10**6)).sign() < 0


def test_eta_independence_and_scaling():
    a = evaluate(JInputs(3, F(5), F(1, 50), P6))
    b = evaluate(JInputs(3, F(5), F(1, 7), P6))
    assert a.J3 == b.J3 and a.J_varpi == b.J_varpi and a.J0 == b.J0
    c = F(-3, 7)
    scaled = evaluate(JInputs(3, F(5), F(1, 50), Poly([c * x for x in P6.c])))
    for name in ("J0", "J1", "J2", "J3", "J_varpi"):
        assert getattr(scaled, name) == getattr(a, name) * (c * c)


def test_rational_helpers():
    assert beta_moment(2, 3) == F(1, 60)
    assert A0_kl(3, 1) == F(1, 60)
    assert J0(3, monomial_weight(1)) / math.factorial(2) == EC(F(1, 60))
    assert harmonic_L(4) == F(25, 12)
    assert C_ell(0) == F(1, 2)
    assert C_ell(1) == F(2, 4) + F(2, 4) * F(1, 3) / 2


@pytest.mark.parametrize("B", [4, 60])
def test_monomial_identities_small(B):
    for k in (2, 5, 9, 16):
        ell = math.isqrt(k)
        P = monomial_weight(ell)
        assert J0(k, P) / math.factorial(k - 1) == EC(A0_kl(k, ell))
        assert J3(k, F(B), P) / math.factorial(k - 2) == EC.log_of(F(B - 1), A_kl(k, ell))


def test_asymptotic_main_term():
    assert asymptotic_J_main(4, 2, 4) == pytest.approx(float(A_kl(4, 2)) * math.log(math.exp(0.5772156649015329) * 4))
    # B e^gamma k / 4 == 1
    assert asymptotic_J_main(2, 1, 2 * math.exp(-0.5772156649015329)) == pytest.approx(0, abs=1e-15)


def test_asymptotic_ratio_report():
    ratios = []
    for k in (25, 100, 400):
        ell = math.isqrt(k)
        P = monomial_weight(ell)
        r = evaluate(JInputs(k, F(4), F(0), P))
        # A(k, ell) underflows a double at k = 400, so divide it out exactly first
        scaled = float((r.J1 + r.J2 + r.J3) / (math.factorial(k - 2) * A_kl(k, ell)))
        ratios.append(scaled * float(A_kl(k, ell)) / asymptotic_J_main(k, ell, 4) if k <= 100
                      else scaled / math.log(math.exp(0.5772156649015329) * k))
    print("exact/asymptotic ratios k=25,100,400:", ratios)
    assert all(0.5 < x < 2 for x in ratios)
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)
