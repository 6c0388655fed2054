"""Curve values against closed forms and frozen references."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stochorder.families import (
    Binomial,
    DiscreteWeibull,
    GeneralizedPoisson,
    HurwitzLerch,
    NegBinomial,
    Poisson,
    TruncatedPmf,
    mean_with_error,
    survival,
    truncate,
)
from stochorder.measures import hazard_at, hazard_curve, mrl_curve, survival_curve


def test_survival_curve_matches_pointwise_survival():
    spec = Poisson(3.0)
    t = truncate(spec, 1e-12)
    sc = survival_curve(t)
    for x in range(0, t.horizon + 1, 3):
        want = survival(spec, x, tol=1e-15)
        assert abs(sc.values[x] - want) <= sc.abs_errors[x] + 1e-15


def test_survival_curve_endpoints():
    t = truncate(NegBinomial(2, 0.4), 1e-10)
    sc = survival_curve(t)
    assert sc.values[0] == pytest.approx(1.0, abs=1e-12)
    assert sc.values[-1] == t.tail_mass
    assert len(sc) == t.horizon + 2
    assert np.all(np.diff(sc.values) <= 0)


def test_survival_deep_tail_relative_accuracy():
    # suffix accumulation keeps the tail accurate relatively, not just absolutely
    spec = Poisson(1.0)
    t = truncate(spec, 1e-12)
    sc = survival_curve(t)
    n = t.horizon
    want = survival(spec, n, tol=1e-18)
    assert want < 1e-10
    assert abs(sc.values[n] - want) / want < 1e-9


def test_hazard_binom_terminal_exactly_one():
    t = truncate(Binomial(6, 0.3), 1e-12)
    hc = hazard_curve(t)
    assert hc.values[-1] == 1.0
    assert np.all((hc.values >= 0) & (hc.values <= 1.0 + 1e-12))


def test_hazard_geometric_constant():
    # negbinomial r=1 has constant hazard h(x) = p
    t = truncate(NegBinomial(1, 0.35), 1e-12)
    hc = hazard_curve(t)
    assert np.allclose(hc.values, 0.35, rtol=1e-10)
    assert hazard_at(t, 3) == pytest.approx(0.35, rel=1e-10)


def test_hazard_at_range_check():
    t = truncate(Poisson(1.0), 1e-10)
    with pytest.raises(IndexError):
        hazard_at(t, t.horizon + 1)
    with pytest.raises(IndexError):
        hazard_at(t, -1)


def test_mrl_starts_at_mean_plus_one():
    for spec in [Poisson(2.0), Binomial(8, 0.4), NegBinomial(3, 0.5),
                 GeneralizedPoisson(1.5, 0.3), HurwitzLerch(0.5, 1.5, 0.3)]:
        t = truncate(spec, 1e-12)
        mc = mrl_curve(t)
        m, err = mean_with_error(spec)
        assert mc.domain_start == -1
        assert abs(mc.values[0] - (m + 1.0)) <= mc.abs_errors[0] + err + 1e-12


def test_mrl_geometric_constant():
    # memoryless case: m(x) is constant, equal to mean + 1; near the horizon
    # the certified band widens but must always cover the true value
    t = truncate(NegBinomial(1, 0.4), 1e-12)
    mc = mrl_curve(t)
    want = 0.6 / 0.4 + 1.0
    assert np.all(np.abs(mc.values - want) <= mc.abs_errors + 1e-9)
    assert np.allclose(mc.values[:10], want, rtol=1e-9)


def test_mrl_binomial_terminal():
    t = truncate(Binomial(5, 0.5), 1e-12)
    mc = mrl_curve(t)
    # last certified point is x = n-1 with m = S(n)/S(n) = 1
    assert len(mc) == 6  # x = -1 .. 4
    assert mc.values[-1] == pytest.approx(1.0, rel=1e-12)


def test_mrl_certification_cut():
    # heavy-tailed truncation: the certified range must stop before the
    # error band swamps the value
    t = truncate(DiscreteWeibull(0.5, 0.2), 1e-12)
    mc = mrl_curve(t)
    assert len(mc) < t.horizon + 1
    rel = mc.abs_errors / (1.0 + np.abs(mc.values))
    assert np.all(rel <= 0.25)


def test_mrl_uncertifiable_raises():
    t = TruncatedPmf(probs=np.array([0.6, 0.4 - 1e-13]), tail_mass=1e-13,
                     tail_tol=1e-12, upper_is_exact=False)  # excess unknown
    with pytest.raises(ValueError):
        mrl_curve(t)


def test_curve_points_use_natural_coordinates():
    t = truncate(HurwitzLerch(0.5, 1.5, 0.3), 1e-12)
    sc = survival_curve(t)
    xs = [p[0] for p in sc.points()]
    assert xs[0] == 1  # natural support of this family starts at 1
    mc = mrl_curve(t)
    assert next(iter(mc.points()))[0] == 0  # internal -1 shifted by 1


@given(st.sampled_from([Poisson(0.3), Poisson(4.0), NegBinomial(2, 0.3),
                        GeneralizedPoisson(0.8, 0.5), HurwitzLerch(0.4, 0.5, 0.8),
                        Binomial(12, 0.7)]),
       st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_hazard_bounds_property(spec, seed):
    t = truncate(spec, 1e-10)
    hc = hazard_curve(t)
    assert np.all(hc.values >= 0.0)
    assert np.all(hc.values <= 1.0 + hc.abs_errors)


@given(st.sampled_from([Poisson(2.0), NegBinomial(4, 0.6),
                        GeneralizedPoisson(2.0, 0.25), HurwitzLerch(0.7, 2.0, 0.1)]))
@settings(max_examples=20, deadline=None)
def test_mrl_matches_brute_force(spec):
    t = truncate(spec, 1e-13)
    mc = mrl_curve(t)
    s = survival_curve(t).values
    for x in [0, 1, 5]:
        if x + 1 >= len(mc):
            continue
        brute = float(np.sum(s[x + 1:][::-1])) / s[x + 1]
        assert abs(mc.values[x + 1] - brute) <= mc.abs_errors[x + 1] + 1e-9 * brute


def test_mrl_mean_identity():
    # m(x) reconstructs conditional means: S(x+1) * m(x) = sum_{i>x} S(i),
    # up to the residual mass beyond the horizon (irrelevant at shallow x)
    t = truncate(Poisson(5.0), 1e-12)
    mc = mrl_curve(t)
    s = survival_curve(t).values
    suffix = np.cumsum(s[::-1])[::-1]
    for x in range(-1, min(10, len(mc) - 1)):
        lhs = s[x + 1] * mc.values[x + 1]
        assert lhs == pytest.approx(suffix[x + 1], rel=1e-9)
