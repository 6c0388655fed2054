"""Family constructors, pmf/survival/mean values, truncation guarantees.

Reference numbers were produced by an independent high-precision script
(mpmath lerchphi/zeta for the series normalizers, exact chunked summation
with rigorous integral tail brackets for discrete-Weibull means) and are
frozen here as literals.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stochorder.errors import ConvergenceError, ParameterError
from stochorder.families import (
    Binomial,
    DiscreteWeibull,
    GeneralizedPoisson,
    HurwitzLerch,
    MAX_TERMS,
    NegBinomial,
    Poisson,
    TruncatedPmf,
    family_name,
    format_family,
    hl_normalizer,
    mean,
    mean_with_error,
    origin_shift,
    panjer_coefficients,
    parse_family,
    pmf,
    survival,
    truncate,
    upper_support,
)

EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# validation


@pytest.mark.parametrize("bad", [
    lambda: Poisson(0.0),
    lambda: Poisson(-1.0),
    lambda: Poisson(math.inf),
    lambda: Binomial(0, 0.5),
    lambda: Binomial(3, 0.0),
    lambda: Binomial(3, 1.0),
    lambda: Binomial(2.5, 0.5),
    lambda: NegBinomial(0, 0.5),
    lambda: NegBinomial(1.5, 0.5),
    lambda: NegBinomial(2, 1.0),
    lambda: DiscreteWeibull(0.0, 1.0),
    lambda: DiscreteWeibull(1.0, -0.5),
    lambda: GeneralizedPoisson(0.0, 0.5),
    lambda: GeneralizedPoisson(1.0, 1.0),
    lambda: GeneralizedPoisson(1.0, -0.1),
    lambda: HurwitzLerch(0.0, 1.0, 0.5),
    lambda: HurwitzLerch(1.2, 1.0, 0.5),
    lambda: HurwitzLerch(0.5, -0.1, 0.5),
    lambda: HurwitzLerch(0.5, 1.0, 1.5),
    lambda: HurwitzLerch(1.0, 0.0, 0.5),
])
def test_invalid_parameters_raise(bad):
    with pytest.raises(ParameterError):
        bad()


def test_integer_counts_coerced():
    assert Binomial(np.int64(7), 0.5).n == 7
    assert isinstance(Binomial(np.int64(7), 0.5).n, int)
    assert NegBinomial(3.0, 0.5).r == 3


def test_support_metadata():
    assert upper_support(Binomial(9, 0.2)) == 9.0
    assert upper_support(Poisson(2.0)) == math.inf
    assert origin_shift(HurwitzLerch(0.5, 1.0, 0.3)) == 1
    assert origin_shift(Poisson(1.0)) == 0


# ---------------------------------------------------------------------------
# recursion coefficients


def test_panjer_coefficients():
    a, b, logf0 = panjer_coefficients(Poisson(2.5))
    assert a == 0.0 and b == 2.5 and logf0 == -2.5

    a, b, logf0 = panjer_coefficients(Binomial(10, 0.3))
    assert a == pytest.approx(-0.3 / 0.7)
    assert b == pytest.approx(11 * 0.3 / 0.7)
    assert logf0 == pytest.approx(10 * math.log(0.7))

    # a = 1-p (positive); the sign matters, a = p-1 would produce negative mass
    a, b, logf0 = panjer_coefficients(NegBinomial(3, 0.4))
    assert a == pytest.approx(0.6)
    assert b == pytest.approx(2 * 0.6)
    assert logf0 == pytest.approx(3 * math.log(0.4))

    assert panjer_coefficients(DiscreteWeibull(1.0, 1.0)) is None
    assert panjer_coefficients(HurwitzLerch(0.5, 1.0, 0.0)) is None


# ---------------------------------------------------------------------------
# pmf / survival spot values


def test_poisson_values():
    p = Poisson(1.0)
    assert pmf(p, 0) == pytest.approx(0.367879441171442322, rel=1e-14)
    assert survival(p, 2) == pytest.approx(0.264241117657115357, rel=1e-13)
    assert survival(p, 0) == 1.0


def test_negbinomial_values():
    nb = NegBinomial(3, 0.5)
    want = [0.125, 0.1875, 0.1875, 0.15625, 0.1171875]
    for k, w in enumerate(want):
        assert pmf(nb, k) == pytest.approx(w, rel=1e-13)


def test_binomial_values():
    b = Binomial(4, 0.5)
    for k, w in enumerate([0.0625, 0.25, 0.375, 0.25, 0.0625]):
        assert pmf(b, k) == pytest.approx(w, rel=1e-13)
    assert pmf(b, 5) == 0.0
    assert survival(b, 4) == pytest.approx(0.0625, rel=1e-13)
    assert survival(b, 5) == 0.0


def test_gpoisson_values():
    gp = GeneralizedPoisson(2.0, 0.5)
    want = [0.135335283236612692, 0.16416999724779759,
            0.149361205103591829, 0.123305982307800545]
    for k, w in enumerate(want):
        assert pmf(gp, k) == pytest.approx(w, rel=1e-13)
    gp = GeneralizedPoisson(1.0, 0.75)
    want = [0.367879441171442322, 0.173773943450445127,
            0.102606248279873494, 0.0682587617037606216]
    for k, w in enumerate(want):
        assert pmf(gp, k) == pytest.approx(w, rel=1e-13)


def test_weibull_survival_closed_form():
    assert survival(DiscreteWeibull(0.75, 0.3), 5) == pytest.approx(
        0.17088919405402631341, rel=1e-15)
    assert survival(DiscreteWeibull(0.5, 0.2), 5) == pytest.approx(
        0.20496968425522882347, rel=1e-15)


# ---------------------------------------------------------------------------
# series normalizer


@pytest.mark.parametrize("z,s,a,want", [
    (0.5, 0.0, 0.0, 0.69314718055994530942),
    (0.2, 1.0, 0.7, 0.075359450933354199631),
    (0.5, 1.5, 0.3, 0.29932123265160216096),
    (0.5, 2.0, 0.3, 0.25269803988956856368),
    (0.5, 2.3, 0.3, 0.22947988522251611536),
    (0.2, 1.5, 0.7, 0.056758400473154927644),
    (0.5, 2.75, 0.3, 0.19969950830841148282),
    (0.95, 0.5, 1.0, 0.98332350885434643739),
    (1.0, 1.5, 0.25, 0.84745195469768586272),
    (1.0, 0.5, 0.0, 2.6123753486854883433),
])
def test_hl_normalizer_frozen(z, s, a, want):
    assert hl_normalizer(z, s, a) == pytest.approx(want, rel=1e-13)


def test_hl_normalizer_rejects_divergent():
    with pytest.raises(ParameterError):
        hl_normalizer(1.0, 0.0, 0.5)


# ---------------------------------------------------------------------------
# means


def test_closed_form_means():
    assert mean(Poisson(2.5)) == 2.5
    assert mean(Binomial(10, 0.3)) == pytest.approx(3.0, rel=1e-15)
    assert mean(NegBinomial(3, 0.25)) == pytest.approx(9.0, rel=1e-15)
    assert mean(GeneralizedPoisson(2.0, 0.5)) == pytest.approx(4.0, rel=1e-15)


def test_hl_means_frozen():
    # internal 0-based mean = native mean - 1
    cases = [
        ((0.2, 1.0, 0.7), 1.0918412798962246598),
        ((0.5, 1.5, 0.3), 1.1736441047944110093),
        ((0.5, 2.0, 0.3), 1.1235310997706238725),
        ((0.5, 2.3, 0.3), 1.1010398804368598272),
        ((0.2, 1.5, 0.7), 1.0716529878927723573),
        ((0.5, 2.75, 0.3), 1.0750856618144618294),
        ((1.0, 1.5, 0.25), 2.361422804796138291),
    ]
    for (z, s, a), native in cases:
        got = mean(HurwitzLerch(z, s, a), tol=1e-9)
        assert got == pytest.approx(native - 1.0, abs=1e-9)


def test_hl_infinite_mean():
    m, err = mean_with_error(HurwitzLerch(1.0, 0.8, 0.25))
    assert math.isinf(m)
    assert mean(HurwitzLerch(1.0, 1.0, 0.0)) == math.inf


def test_weibull_means_frozen():
    cases = [
        ((0.3, 0.3), 2.5613736584143436),
        ((0.75, 0.3), 6.6808826318349706),
    ]
    for (al, be), want in cases:
        got, err = mean_with_error(DiscreteWeibull(al, be))
        assert err < 1e-8
        assert abs(got - want) <= err
        assert mean(DiscreteWeibull(al, be), tol=1e-7) == pytest.approx(want, abs=1e-7)


def test_weibull_mean_cap_limited():
    # heavy tail: horizon for 1e-9 certification exceeds the term cap, so
    # mean() refuses while mean_with_error() reports an honest wider band
    spec = DiscreteWeibull(0.5, 0.2)
    got, err = mean_with_error(spec, tol=1e-9)
    assert 1e-9 < err < 1e-4
    assert abs(got - 59.77507973262225) <= err
    with pytest.raises(ConvergenceError):
        mean(spec, tol=1e-9)


# ---------------------------------------------------------------------------
# truncation


def _check_truncation(spec, tail_tol=1e-12):
    t = truncate(spec, tail_tol)
    assert np.all(t.probs >= 0)
    assert 0.0 <= t.tail_mass < tail_tol
    gap = abs(float(np.sum(t.probs)) + t.tail_mass - 1.0)
    assert gap <= 4 * EPS * len(t.probs)
    return t


@pytest.mark.parametrize("spec", [
    Poisson(0.05), Poisson(1.0), Poisson(20.0),
    NegBinomial(1, 0.5), NegBinomial(50, 0.02), NegBinomial(3, 0.98),
    GeneralizedPoisson(0.05, 0.02), GeneralizedPoisson(20.0, 0.95),
    HurwitzLerch(0.05, 0.0, 0.0), HurwitzLerch(0.95, 4.0, 1.0),
    HurwitzLerch(1.0, 4.0, 0.5), HurwitzLerch(1.0, 2.0, 0.25),
    DiscreteWeibull(0.05, 3.0), DiscreteWeibull(5.0, 0.5),
])
def test_truncate_normalization(spec):
    _check_truncation(spec)


def test_truncate_hl_polynomial_tail_over_cap():
    # z = 1, small s: survival decays like y^(-s), horizon far beyond the cap
    with pytest.raises(ConvergenceError):
        truncate(HurwitzLerch(1.0, 0.5, 0.0), 1e-12)


def test_truncate_horizon_is_minimal():
    # N is the smallest index with survival(N+1) < tail_tol
    for spec in [Poisson(3.0), NegBinomial(4, 0.3), GeneralizedPoisson(1.5, 0.4),
                 HurwitzLerch(0.6, 1.2, 0.5), DiscreteWeibull(1.5, 1.2)]:
        t = truncate(spec, 1e-10)
        n = t.horizon
        assert survival(spec, n + 1, tol=1e-14) < 1e-10
        assert survival(spec, n, tol=1e-14) >= 1e-10


def test_truncate_binomial_exact():
    t = truncate(Binomial(7, 0.4))
    assert t.upper_is_exact
    assert t.horizon == 7
    assert t.tail_mass == 0.0
    assert t.tail_excess_bound == 0.0


def test_truncate_weibull_heavy_tail():
    t = truncate(DiscreteWeibull(0.5, 0.2), 1e-12)
    assert 8.0e6 < t.horizon < 8.1e6
    assert t.tail_excess_bound < 1e-5
    with pytest.raises(ConvergenceError):
        truncate(DiscreteWeibull(0.5, 0.1), 1e-12)


def test_truncate_hl_origin_shift():
    t = truncate(HurwitzLerch(0.5, 1.5, 0.3))
    assert t.origin_shift == 1
    # probs[0] is the mass at natural support point 1
    assert t.probs[0] == pytest.approx(pmf(HurwitzLerch(0.5, 1.5, 0.3), 0), rel=1e-13)


def test_truncate_excess_bound_dominates_true_excess():
    # sum_{i>N} S(i) computed by brute force stays within the certified bound
    for spec in [Poisson(4.0), GeneralizedPoisson(1.0, 0.3), NegBinomial(2, 0.4)]:
        t = truncate(spec, 1e-8)
        n = t.horizon
        brute = sum(survival(spec, i, tol=1e-16) for i in range(n + 1, n + 200))
        assert brute <= t.tail_excess_bound + 1e-15


def test_truncated_pmf_invariants():
    with pytest.raises(ParameterError):
        TruncatedPmf(probs=np.array([0.5, 0.4]), tail_mass=0.2, tail_tol=1e-12,
                     upper_is_exact=False)
    with pytest.raises(ParameterError):
        TruncatedPmf(probs=np.array([0.5, -0.5]), tail_mass=0.0, tail_tol=1e-12,
                     upper_is_exact=True)
    with pytest.raises(ParameterError):
        TruncatedPmf(probs=np.array([0.5, 0.4]), tail_mass=0.0, tail_tol=1e-12,
                     upper_is_exact=True)
    ok = TruncatedPmf(probs=np.array([0.5, 0.5]), tail_mass=0.0, tail_tol=1e-12,
                      upper_is_exact=True, tail_excess_bound=0.0)
    assert ok.horizon == 1


# ---------------------------------------------------------------------------
# property tests


_family_strategy = st.one_of(
    st.builds(Poisson, st.floats(0.05, 20.0)),
    st.builds(Binomial, st.integers(1, 50), st.floats(0.02, 0.98)),
    st.builds(NegBinomial, st.integers(1, 50), st.floats(0.02, 0.98)),
    st.builds(GeneralizedPoisson, st.floats(0.05, 20.0), st.floats(0.02, 0.95)),
    st.builds(HurwitzLerch, st.floats(0.05, 0.95), st.floats(0.0, 4.0), st.floats(0.0, 1.0)),
    st.builds(DiscreteWeibull, st.floats(0.05, 5.0), st.floats(0.4, 3.0)),
)


@given(_family_strategy)
@settings(max_examples=60, deadline=None)
def test_truncation_properties(spec):
    t = truncate(spec, 1e-10)
    assert 0.0 <= t.tail_mass < 1e-10
    gap = abs(float(np.sum(t.probs)) + t.tail_mass - 1.0)
    assert gap <= 4 * EPS * len(t.probs)
    assert t.tail_excess_bound >= 0.0
    # pmf values in the block agree with the single-point evaluator
    for x in [0, t.horizon // 2, t.horizon]:
        assert t.probs[x] == pytest.approx(pmf(spec, x), rel=1e-11, abs=1e-300)


@given(_family_strategy)
@settings(max_examples=40, deadline=None)
def test_mean_matches_truncated_first_moment(spec):
    m, err = mean_with_error(spec)
    t = truncate(spec, 1e-12)
    x = np.arange(len(t.probs), dtype=float)
    approx = float(np.sum((x * t.probs)[::-1]))
    # first moment over the block underestimates by at most the excess bound
    slack = 10 * 1e-12 * (t.horizon + 1) + err + 1e-12 * max(1.0, m)
    if math.isfinite(t.tail_excess_bound):
        assert approx <= m + slack
        assert m <= approx + t.tail_excess_bound + slack
    else:
        assert approx <= m + slack


# ---------------------------------------------------------------------------
# text forms


def test_parse_format_round_trip():
    specs = [
        Poisson(1.5),
        Binomial(10, 0.3),
        NegBinomial(4, 0.55),
        DiscreteWeibull(0.75, 0.3),
        GeneralizedPoisson(2.0, 0.25),
        HurwitzLerch(0.5, 1.5, 0.3),
    ]
    for s in specs:
        assert parse_family(format_family(s)) == s


def test_parse_variants():
    assert parse_family("Poisson(2)") == Poisson(2.0)
    assert parse_family(" BINOMIAL( 10 , 0.3 ) ") == Binomial(10, 0.3)
    assert parse_family("negbinomial(3.0, 0.5)") == NegBinomial(3, 0.5)
    assert parse_family("dweibull(0.5,0.2)") == DiscreteWeibull(0.5, 0.2)
    assert parse_family("gpoisson(2, 0.5)") == GeneralizedPoisson(2.0, 0.5)
    assert parse_family("hurwitzlerch(0.5,1.5,0.3)") == HurwitzLerch(0.5, 1.5, 0.3)


@pytest.mark.parametrize("text", [
    "", "poisson", "poisson()", "poisson(1,2)", "binomial(2.5, 0.3)",
    "negbinomial(3, 1.5)", "gamma(1)", "poisson(abc)", "hurwitzlerch(0.5, 1.5)",
])
def test_parse_rejects(text):
    with pytest.raises(ParameterError):
        parse_family(text)


def test_family_name():
    assert family_name(Poisson(1.0)) == "poisson"
    assert family_name(HurwitzLerch(0.5, 1.0, 0.0)) == "hurwitzlerch"
