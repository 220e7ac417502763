import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wreathwalk.errors import DomainError
from wreathwalk.iterlog import (
    ConcaveExtension,
    IterLogParams,
    LTilde,
    TowerReal,
    appendix_inequality_check,
    composition_ratio,
    concave_extension,
    concavity_scan,
    iterated_log,
    l_tilde,
    m_derivatives,
    reciprocal_iterlog,
    reciprocal_iterlog_concavity,
    threshold_T,
    tower_samples,
    tower_sum,
)

mpmath.mp.dps = 50


# -- TowerReal ------------------------------------------------------------------

def test_tower_normalisation_and_order():
    assert TowerReal(1, 2.0) == TowerReal(0, math.exp(2.0))
    assert TowerReal(3, 1.0).depth == 0
    big = TowerReal(1, 800.0)
    assert big.depth == 1 and float(big) == math.inf
    assert TowerReal(0, 1e308) < big < TowerReal(1, 801.0) < TowerReal(2, 710.0)
    with pytest.raises(ValueError):
        TowerReal(0, 0.0)


def test_tower_log_exp_text():
    t = TowerReal(2, 64.0)
    assert iterated_log(2, t) == 64.0
    assert t.log().log() == TowerReal(0, 64.0)
    assert TowerReal.from_text(t.to_text()) == t
    assert TowerReal.from_text("12.5") == TowerReal(0, 12.5)
    with pytest.raises(DomainError):
        TowerReal(0, 0.5).log()
    with pytest.raises(OverflowError):
        iterated_log(1, TowerReal(3, 800.0))


def test_times_exp_and_sum():
    assert TowerReal(1, 800.0).times_exp(-100.0) == TowerReal(0, math.exp(700.0))
    s = tower_sum([TowerReal(1, 800.0), TowerReal(1, 800.0)])
    assert s.top == pytest.approx(800.0 + math.log(2.0), rel=1e-15)
    assert tower_sum([1.0, 2.0]) == TowerReal(0, 3.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-300, 1e300), st.floats(1e-300, 1e300))
def test_tower_order_matches_float(a, b):
    assert (TowerReal(0, a) < TowerReal(0, b)) == (a < b)


# -- closed-form values -----------------------------------------------------------

def test_threshold_values():
    assert threshold_T(IterLogParams(1, 1.0)) == TowerReal(0, math.exp(4.0))
    assert threshold_T(IterLogParams(2, 0.5)) == TowerReal(2, 64.0)
    assert threshold_T(IterLogParams(3, 1.0)).depth >= 1


@pytest.mark.parametrize("k,alpha", [(1, 1.0), (1, 0.5), (2, 1.0), (2, 0.25), (3, 0.75)])
def test_extension_beta_and_knot(k, alpha):
    p = IterLogParams(k, alpha)
    f = concave_extension(p)
    # beta = LTilde(T)/(2T) = (4k)^-1 / 2 and ln^(k) z = (8k)^(1/alpha)
    assert f.beta == pytest.approx(1.0 / (8 * k), rel=1e-14)
    assert f.knot_log == pytest.approx((8.0 * k) ** (1.0 / alpha), rel=1e-12)
    assert f.knot_by_bisection().top == pytest.approx(f.knot.top, rel=1e-12)
    slope, beta = f.tangency()
    assert slope <= beta  # LTilde crosses the line from above


def test_extension_k1_alpha1_knot_is_e8():
    f = ConcaveExtension(IterLogParams(1, 1.0))
    assert f.beta == 0.125
    assert f.knot.top == pytest.approx(math.exp(8.0), rel=1e-14)
    assert f(np.array([8.0, 800.0]))[0] == 1.0
    assert f(1e6) == pytest.approx(1e6 / math.log(1e6), rel=1e-14)


@pytest.mark.parametrize("k,alpha,top", [(1, 1.0, 50.0), (1, 0.5, 300.0), (2, 1.0, 30.0), (2, 0.75, 500.0)])
def test_l_tilde_against_mpmath(k, alpha, top):
    # x = exp(top): ln LTilde(x) = top - alpha ln^(k) ... computed in 50 digits
    x = mpmath.e ** mpmath.mpf(top)
    m = x
    for _ in range(k):
        m = mpmath.log(m)
    want = mpmath.log(x) - alpha * mpmath.log(m)
    got = l_tilde(IterLogParams(k, alpha), TowerReal(1, top)).ln()
    assert got == pytest.approx(float(want), rel=1e-14)


def test_l_tilde_tower_scale():
    p = IterLogParams(2, 1.0)
    # x = exp(1e5): ln LTilde(x) = 1e5 - ln ln 1e5
    got = l_tilde(p, TowerReal(1, 1e5))
    assert got.depth == 1
    assert got.top == pytest.approx(1e5 - math.log(math.log(1e5)), rel=1e-15)
    # x = exp(exp(1e5)): dividing by ln ln x = 1e5 is below double resolution of ln x
    x = TowerReal(2, 1e5)
    assert l_tilde(p, x) == x


@pytest.mark.parametrize("k,alpha", [(1, 1.0), (1, 0.5), (2, 0.75), (3, 0.25)])
def test_m_derivatives_finite_difference(k, alpha):
    p = IterLogParams(k, alpha)
    x0 = 1e5 if k < 3 else 1e200

    def m(x):
        u = mpmath.mpf(x)
        for _ in range(k):
            u = mpmath.log(u)
        return u**alpha

    mm, dm, d2m = m_derivatives(p, x0)
    assert mm == pytest.approx(float(m(x0)), rel=1e-12)
    assert dm == pytest.approx(float(mpmath.diff(m, x0)), rel=1e-8)
    assert d2m == pytest.approx(float(mpmath.diff(m, x0, 2)), rel=1e-6)


# -- concavity ------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
def test_ltilde_scan_k1(alpha):
    p = IterLogParams(1, alpha)
    rep = concavity_scan(LTilde(p), threshold_T(p), 1e300, 2000)
    assert rep.passed, rep.violations[:3]


@pytest.mark.parametrize("k,alpha", [(1, 1.0), (1, 0.25), (2, 1.0)])
def test_extension_scan_across_knot(k, alpha):
    f = concave_extension(IterLogParams(k, alpha))
    if f.knot.depth == 0:
        rep = concavity_scan(f, 0.0, 1e300, 2000, extra=[f._knot_float])
    else:
        rep = concavity_scan(f, 10.0, TowerReal(2, 300.0), 2000)
    assert rep.passed, rep.violations[:3]


def test_ltilde_below_threshold_not_concave():
    # Close to e the divisor blows up and LTilde is convex there.
    rep = concavity_scan(LTilde(IterLogParams(1, 1.0)), 3.0, 10.0, 200)
    assert not rep.passed


@pytest.mark.parametrize("f", [lambda x: x * x, np.exp, lambda x: x**1.5])
def test_negative_controls(f):
    assert not concavity_scan(f, 1.0, 100.0, 500).passed


def test_tower_range_scan_needs_log_ratio():
    with pytest.raises(TypeError):
        concavity_scan(lambda x: x, 1.0, TowerReal(2, 800.0), 10)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_appendix_inequalities(k, alpha):
    p = IterLogParams(k, alpha)
    pts = tower_samples(p, 120)
    assert len(pts) == 120 and all(x >= threshold_T(p) for x in pts)
    for x in pts:
        rep = appendix_inequality_check(p, x)
        assert rep.passed, [r for r in rep.rows if not r.passed]


def test_appendix_matches_closed_form_derivatives():
    p = IterLogParams(1, 0.5)
    x = 1e100
    m, dm, d2m = m_derivatives(p, x)
    rows = {r.check: float(r.lhs) for r in appendix_inequality_check(p, x).rows}
    assert rows["second"] == pytest.approx(-d2m * x / dm, rel=1e-10)
    assert rows["concavity"] == pytest.approx(2 * x * dm / m - x * d2m / dm, rel=1e-10)


def test_appendix_domain():
    with pytest.raises(DomainError):
        appendix_inequality_check(IterLogParams(1, 1.0), 10.0)


@pytest.mark.parametrize("k,alpha", [(1, 1.0), (1, 0.5), (1, 0.25), (2, 1.0)])
def test_reciprocal_concave_on_domain(k, alpha):
    p = IterLogParams(k, alpha)
    ln_t = threshold_T(p).ln()
    n = TowerReal.exp_of(2 * ln_t + 50)
    hi = TowerReal.exp_of(n.ln() - ln_t)
    rep = reciprocal_iterlog_concavity(k, alpha, n, 1e-300, hi, 3000)
    assert rep.passed


def test_reciprocal_refuses_unresolvable_scale():
    # ln T = e^64 for k=2, alpha=1/2: steps of ln x vanish below double resolution.
    p = IterLogParams(2, 0.5)
    ln_t = threshold_T(p).ln()
    n = TowerReal.exp_of(2 * ln_t)
    with pytest.raises(OverflowError):
        reciprocal_iterlog_concavity(2, 0.5, n, 1.0, TowerReal.exp_of(ln_t), 100)


def test_reciprocal_values_and_domain():
    assert reciprocal_iterlog(1, 1.0, math.log(100.0), math.log(10.0)) == pytest.approx(1 / math.log(10.0))
    assert math.isnan(reciprocal_iterlog(2, 1.0, 1.0, 1.0))
    with pytest.raises(DomainError):
        reciprocal_iterlog_concavity(1, 1.0, 10.0, 1.0, 2.0, 10)


def test_composition_ratio_identity():
    for n in (1e10, 1e100, 1e300):
        assert composition_ratio(1, 1.0, n) == pytest.approx(1.0, rel=1e-12)
