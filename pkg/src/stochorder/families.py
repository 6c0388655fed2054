"""Parametric families of discrete lifetime distributions.

Every family lives on a 0-based integer support internally.  The
Hurwitz-Lerch family, whose natural support starts at 1, is stored with
``origin_shift = 1``: internal index y corresponds to the natural value
y + 1, and reported means are translated back by the caller when needed.

Probability masses are computed in log space.  For the Panjer members
(Poisson, binomial, negative binomial) the log pmf is accumulated through
the recursion f(x) = ((a*x + b)/x) * f(x-1) starting from f(0), so the
recursion identity holds to rounding error by construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, ParameterError

MAX_TERMS = 10_000_000
_EPS = np.finfo(float).eps


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


def _finite_pos(v: float) -> bool:
    return math.isfinite(v) and v > 0


@dataclass(frozen=True)
class Poisson:
    lam: float

    def __post_init__(self):
        _require(_finite_pos(self.lam), f"poisson: lambda must be in (0, inf), got {self.lam}")


def _coerce_count(obj, value, name: str, what: str) -> None:
    try:
        as_int = int(value)
        ok = as_int == value and as_int >= 1
    except (TypeError, ValueError):
        ok = False
    if not ok:
        raise ParameterError(f"{what} must be an integer >= 1, got {value}")
    object.__setattr__(obj, name, as_int)


@dataclass(frozen=True)
class Binomial:
    n: int
    p: float

    def __post_init__(self):
        _coerce_count(self, self.n, "n", "binomial: n")
        _require(0.0 < self.p < 1.0, f"binomial: p must be in (0, 1), got {self.p}")


@dataclass(frozen=True)
class NegBinomial:
    r: int
    p: float

    def __post_init__(self):
        _coerce_count(self, self.r, "r", "negbinomial: r")
        _require(0.0 < self.p < 1.0, f"negbinomial: p must be in (0, 1), got {self.p}")


@dataclass(frozen=True)
class DiscreteWeibull:
    alpha: float
    beta: float

    def __post_init__(self):
        _require(_finite_pos(self.alpha), f"dweibull: alpha must be in (0, inf), got {self.alpha}")
        _require(_finite_pos(self.beta), f"dweibull: beta must be in (0, inf), got {self.beta}")


@dataclass(frozen=True)
class GeneralizedPoisson:
    theta: float
    lam: float

    def __post_init__(self):
        _require(_finite_pos(self.theta), f"gpoisson: theta must be in (0, inf), got {self.theta}")
        _require(0.0 < self.lam < 1.0, f"gpoisson: lambda must be in (0, 1), got {self.lam}")


@dataclass(frozen=True)
class HurwitzLerch:
    z: float
    s: float
    a: float

    def __post_init__(self):
        _require(0.0 < self.z <= 1.0, f"hurwitzlerch: z must be in (0, 1], got {self.z}")
        _require(math.isfinite(self.s) and self.s >= 0.0, f"hurwitzlerch: s must be >= 0, got {self.s}")
        _require(0.0 <= self.a <= 1.0, f"hurwitzlerch: a must be in [0, 1], got {self.a}")
        if self.z == 1.0:
            _require(self.s > 0.0, "hurwitzlerch: z = 1 requires s > 0 for convergence")


FamilySpec = Union[Poisson, Binomial, NegBinomial, DiscreteWeibull, GeneralizedPoisson, HurwitzLerch]

_FAMILY_NAMES = {
    Poisson: "poisson",
    Binomial: "binomial",
    NegBinomial: "negbinomial",
    DiscreteWeibull: "dweibull",
    GeneralizedPoisson: "gpoisson",
    HurwitzLerch: "hurwitzlerch",
}


def family_name(spec: FamilySpec) -> str:
    return _FAMILY_NAMES[type(spec)]


def origin_shift(spec: FamilySpec) -> int:
    """Offset between the internal 0-based support and the natural one."""
    return 1 if isinstance(spec, HurwitzLerch) else 0


def upper_support(spec: FamilySpec) -> float:
    """Upper extreme of the internal support (math.inf when unbounded)."""
    return float(spec.n) if isinstance(spec, Binomial) else math.inf


def panjer_coefficients(spec: FamilySpec):
    """(a, b, log f(0)) for the recursion f(x) = ((a*x+b)/x) f(x-1), or None.

    The negative binomial uses a = 1-p, b = (r-1)(1-p); flipping the sign
    of either would generate negative masses.
    """
    if isinstance(spec, Poisson):
        return 0.0, spec.lam, -spec.lam
    if isinstance(spec, Binomial):
        q = 1.0 - spec.p
        return -spec.p / q, (spec.n + 1) * spec.p / q, spec.n * math.log1p(-spec.p)
    if isinstance(spec, NegBinomial):
        q = 1.0 - spec.p
        return q, (spec.r - 1) * q, spec.r * math.log(spec.p)
    return None


# ---------------------------------------------------------------------------
# Hurwitz-Lerch normalizer


def hl_normalizer(z: float, s: float, a: float, tol: float = 1e-14) -> float:
    """T(z, s, a) = sum_{x>=1} z^x / (a+x)^(s+1), to absolute error < tol.

    For z < 1 the series is summed directly with a geometric bound
    tail <= z^(N+1) / ((1-z) (a+N+1)^(s+1)) on the remainder.  For z = 1
    the sum is a Hurwitz zeta value, zeta(s+1, a+1), requiring s > 0.
    """
    _require(0.0 < z <= 1.0, f"hl_normalizer: z must be in (0, 1], got {z}")
    _require(math.isfinite(s), f"hl_normalizer: s must be finite, got {s}")
    _require(a >= 0.0, f"hl_normalizer: a must be >= 0, got {a}")
    _require(not (tol <= 0.0), "hl_normalizer: tol must be positive")
    if z == 1.0:
        _require(s > 0.0, "hl_normalizer: z = 1 requires s > 0")
        return float(sc.zeta(s + 1.0, a + 1.0))

    total = 0.0
    block = 256
    x0 = 1
    log_z = math.log(z)
    while x0 < MAX_TERMS:
        x = np.arange(x0, x0 + block, dtype=float)
        total += float(np.sum(np.exp(x * log_z - (s + 1.0) * np.log(a + x))))
        x_next = x0 + block
        # remainder ratio: next/current term = z * ((a+x)/(a+x+1))^(s+1) <= rho
        grow = max(-(s + 1.0), 0.0)
        rho = z * (1.0 + 1.0 / (a + x_next)) ** grow
        if rho < 1.0:
            first_omitted = math.exp(x_next * log_z - (s + 1.0) * math.log(a + x_next))
            if first_omitted / (1.0 - rho) < tol:
                return total
        x0 = x_next
        block = min(block * 2, 1 << 20)
    raise ConvergenceError(f"hl_normalizer(z={z}, s={s}, a={a}) did not reach tol={tol} within {MAX_TERMS} terms")


# ---------------------------------------------------------------------------
# Log pmf blocks


def _hl_log_T(spec: HurwitzLerch) -> float:
    return math.log(hl_normalizer(spec.z, spec.s, spec.a, tol=1e-16 * max(1.0, _hl_T_scale(spec))))


def _hl_T_scale(spec: HurwitzLerch) -> float:
    # coarse magnitude of T used only to turn a relative target into tol
    return spec.z / (1.0 + spec.a) ** (spec.s + 1.0)


def _log_pmf_block(spec: FamilySpec, hi: int) -> np.ndarray:
    """log f(x) for internal x = 0 .. hi-1 (entries beyond a finite support
    are -inf)."""
    if hi <= 0:
        return np.empty(0)
    pj = panjer_coefficients(spec)
    if pj is not None:
        a, b, logf0 = pj
        top = hi
        if isinstance(spec, Binomial):
            top = min(hi, spec.n + 1)
        k = np.arange(1, top, dtype=float)
        out = np.full(hi, -np.inf)
        with np.errstate(divide="ignore"):
            steps = np.log((a * k + b) / k)
        out[:top] = logf0 + np.concatenate(([0.0], np.cumsum(steps)))
        return out
    if isinstance(spec, DiscreteWeibull):
        x = np.arange(hi + 1, dtype=float)
        log_s = -((x / spec.alpha) ** spec.beta)
        delta = np.diff(log_s)  # log S(x+1) - log S(x), negative
        with np.errstate(divide="ignore"):
            return log_s[:-1] + np.log(-np.expm1(delta))
    if isinstance(spec, GeneralizedPoisson):
        x = np.arange(hi, dtype=float)
        th, la = spec.theta, spec.lam
        return math.log(th) + (x - 1.0) * np.log(th + x * la) - sc.gammaln(x + 1.0) - th - la * x
    if isinstance(spec, HurwitzLerch):
        y = np.arange(hi, dtype=float)
        log_T = _hl_log_T(spec)
        return (y + 1.0) * math.log(spec.z) - log_T - (spec.s + 1.0) * np.log(spec.a + y + 1.0)
    raise TypeError(f"unknown family: {spec!r}")


def pmf(spec: FamilySpec, x: int) -> float:
    """Probability mass at internal support point x."""
    if x < 0:
        return 0.0
    u = upper_support(spec)
    if x > u:
        return 0.0
    return float(np.exp(_log_pmf_block(spec, x + 1)[x]))


# ---------------------------------------------------------------------------
# Tail machinery


def _tail_ratio_bound(spec: FamilySpec, m: int) -> float:
    """Upper bound on f(i+1)/f(i) valid for every i >= m (infinite supports)."""
    if isinstance(spec, Poisson):
        return spec.lam / (m + 1.0)
    if isinstance(spec, NegBinomial):
        return (1.0 - spec.p) * (m + spec.r) / (m + 1.0)
    if isinstance(spec, GeneralizedPoisson):
        # f(x+1)/f(x) <= e^(1-lam) * (lam + theta/(x+1)); decreasing in x
        return math.exp(1.0 - spec.lam) * (spec.lam + spec.theta / (m + 1.0))
    if isinstance(spec, HurwitzLerch):
        if spec.z < 1.0:
            return spec.z
        return (1.0 + spec.a + m) ** (spec.s + 1.0) / (2.0 + spec.a + m) ** (spec.s + 1.0)
    raise TypeError(f"no tail ratio bound for {spec!r}")


def _start_hint(spec: FamilySpec, tail_tol: float) -> int:
    L = -math.log(tail_tol)
    if isinstance(spec, Poisson):
        est = spec.lam + 12.0 * math.sqrt(spec.lam) + 2.0 * L
    elif isinstance(spec, NegBinomial):
        mu = spec.r * (1.0 - spec.p) / spec.p
        sd = math.sqrt(spec.r * (1.0 - spec.p)) / spec.p
        est = mu + 12.0 * sd + 2.0 * L
    elif isinstance(spec, GeneralizedPoisson):
        mu = spec.theta / (1.0 - spec.lam)
        sd = math.sqrt(spec.theta) / (1.0 - spec.lam) ** 1.5
        est = mu + 12.0 * sd + 4.0 * L
    elif isinstance(spec, HurwitzLerch) and spec.z < 1.0:
        est = (L + 6.0 * math.log(10.0)) / -math.log(spec.z) + 16.0
    else:
        est = 256.0
    return max(64, int(est))


@dataclass(frozen=True)
class TruncatedPmf:
    """A finite prefix of a pmf together with certified tail information.

    probs[x] is the mass at internal support point x for x = 0..N where
    N = len(probs) - 1 is the smallest index with survival(N+1) < tail_tol.
    tail_excess_bound is an upper bound on sum_{i>N} S(i), the part of the
    mean beyond the horizon; it is math.inf when no bound is available.
    """

    probs: np.ndarray
    tail_mass: float
    tail_tol: float
    upper_is_exact: bool
    origin_shift: int = 0
    tail_excess_bound: float = math.inf

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or len(p) == 0:
            raise ParameterError("TruncatedPmf: probs must be a non-empty 1-D array")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ParameterError("TruncatedPmf: probs must be finite and non-negative")
        if not (0.0 <= self.tail_mass < self.tail_tol):
            raise ParameterError(
                f"TruncatedPmf: tail_mass {self.tail_mass} must lie in [0, tail_tol={self.tail_tol})")
        # internal sanity band, 4x looser than the one asserted in tests so a
        # borderline rounding excursion surfaces as a test failure, not a crash
        gap = abs(float(np.sum(p)) + self.tail_mass - 1.0)
        if gap > 16.0 * _EPS * len(p):
            raise ParameterError(f"TruncatedPmf: mass sums to 1 {gap:.3e} off, beyond the rounding budget")
        if self.upper_is_exact and self.tail_mass != 0.0:
            raise ParameterError("TruncatedPmf: an exactly enclosed support cannot carry tail mass")

    @property
    def horizon(self) -> int:
        return len(self.probs) - 1


def _truncate_weibull(spec: DiscreteWeibull, tail_tol: float, max_terms: int,
                      min_horizon: int) -> TruncatedPmf:
    al, be = spec.alpha, spec.beta
    L = -math.log(tail_tol)
    n_est = al * L ** (1.0 / be) - 1.0
    if n_est > max_terms:
        raise ConvergenceError(
            f"dweibull(alpha={al}, beta={be}): horizon for tail_tol={tail_tol} exceeds {max_terms} terms")
    N = max(0, int(n_est) - 2)
    while math.exp(-(((N + 1) / al) ** be)) >= tail_tol:
        N += 1
        if N > max_terms:
            raise ConvergenceError(
                f"dweibull(alpha={al}, beta={be}): horizon for tail_tol={tail_tol} exceeds {max_terms} terms")
    while N > 0 and math.exp(-((N / al) ** be)) < tail_tol:
        N -= 1
    N = max(N, min_horizon)
    x = np.arange(N + 2, dtype=float)
    log_s = -((x / al) ** be)
    s_vals = np.exp(log_s)
    probs = s_vals[:-1] * -np.expm1(np.diff(log_s))
    tail_mass = float(s_vals[-1])
    # sum_{i>N} S(i) <= S(N+1) + integral_{N+1}^inf exp(-(t/al)^be) dt
    c = 1.0 / be
    integral = (al / be) * math.gamma(c) * float(sc.gammaincc(c, ((N + 1) / al) ** be))
    return TruncatedPmf(probs=probs, tail_mass=tail_mass, tail_tol=tail_tol,
                        upper_is_exact=False, tail_excess_bound=tail_mass + integral)


def _truncate_hl_z1(spec: HurwitzLerch, tail_tol: float, max_terms: int,
                    min_horizon: int) -> TruncatedPmf:
    s, a = spec.s, spec.a
    T = hl_normalizer(1.0, s, a)

    def surv(y: int) -> float:
        # internal survival S(y) = zeta(s+1, a+1+y) / T
        return float(sc.zeta(s + 1.0, a + 1.0 + y)) / T

    if surv(max_terms) >= tail_tol:
        raise ConvergenceError(
            f"hurwitzlerch(z=1, s={s}, a={a}): horizon for tail_tol={tail_tol} exceeds {max_terms} terms")
    lo, hi = 0, max_terms  # smallest N with surv(N+1) < tail_tol
    while lo < hi:
        mid = (lo + hi) // 2
        if surv(mid + 1) < tail_tol:
            hi = mid
        else:
            lo = mid + 1
    N = max(lo, min_horizon)
    probs = np.exp(_log_pmf_block(spec, N + 1))
    tail_mass = surv(N + 1)
    if s > 1.0:
        v = a + N + 2.0
        excess = (float(sc.zeta(s + 1.0, v)) + float(sc.zeta(s, v)) / s) / T
    else:
        excess = math.inf
    return TruncatedPmf(probs=probs, tail_mass=tail_mass, tail_tol=tail_tol,
                        upper_is_exact=False, origin_shift=1, tail_excess_bound=excess)


def truncate(spec: FamilySpec, tail_tol: float = 1e-12, max_terms: int = MAX_TERMS,
             min_horizon: int = 0) -> TruncatedPmf:
    """Truncate to the smallest horizon N with survival(N+1) < tail_tol.

    min_horizon (internal coordinates) forces a longer window than tail_tol
    alone would pick; pair comparisons use it to put both inputs on one range.
    """
    _require(0.0 < tail_tol < 1.0, f"truncate: tail_tol must be in (0, 1), got {tail_tol}")
    _require(min_horizon >= 0, "truncate: min_horizon must be non-negative")
    if min_horizon > max_terms:
        raise ConvergenceError(
            f"{family_name(spec)}: requested horizon {min_horizon} exceeds {max_terms} terms")
    if isinstance(spec, Binomial):
        probs = np.exp(_log_pmf_block(spec, spec.n + 1))
        return TruncatedPmf(probs=probs, tail_mass=0.0, tail_tol=tail_tol,
                            upper_is_exact=True, tail_excess_bound=0.0)
    if isinstance(spec, DiscreteWeibull):
        return _truncate_weibull(spec, tail_tol, max_terms, min_horizon)
    if isinstance(spec, HurwitzLerch) and spec.z == 1.0:
        return _truncate_hl_z1(spec, tail_tol, max_terms, min_horizon)

    target = min(tail_tol * 1e-3, 1e-16)
    M = min(max(_start_hint(spec, tail_tol), min_horizon + 2), max_terms)
    while True:
        logf = _log_pmf_block(spec, M + 1)
        f = np.exp(logf)
        rho = _tail_ratio_bound(spec, M)
        block_ok = rho < 1.0 and f[M] * rho / (1.0 - rho) <= target and f[M] <= target
        if block_ok:
            suffix = np.concatenate((np.cumsum(f[M - 1 :: -1])[::-1], [0.0]))  # suffix[i] = sum f[i..M-1]
            s_est = suffix + f[M]  # S(i) within [s_est, s_est + target]
            below = np.flatnonzero(s_est + target < tail_tol)
            if len(below) > 0 and below[0] >= 1:
                N = max(int(below[0]) - 1, min_horizon)
                if N + 1 > max_terms:
                    raise ConvergenceError(
                        f"{family_name(spec)}: horizon for tail_tol={tail_tol} exceeds {max_terms} terms")
                tail_mass = float(s_est[N + 1])
                # sum_{i>N} S(i) <= sum_{i=N+1}^{M-1} (S_est(i) + target)
                #                   + S(M) / (1 - rho),  S(M) <= f(M)/(1-rho)
                s_hi = s_est + target
                excess = float(np.sum(s_hi[N + 1 : M])) + f[M] / (1.0 - rho) ** 2
                return TruncatedPmf(probs=f[: N + 1], tail_mass=tail_mass, tail_tol=tail_tol,
                                    upper_is_exact=False, origin_shift=origin_shift(spec),
                                    tail_excess_bound=excess)
        if M >= max_terms:
            raise ConvergenceError(
                f"{family_name(spec)}: truncation to tail_tol={tail_tol} did not converge within {max_terms} terms")
        M = min(2 * M, max_terms)


# ---------------------------------------------------------------------------
# Survival and mean


def survival(spec: FamilySpec, x: int, tol: float = 1e-12) -> float:
    """S(x) = P(X >= x) on the internal support, absolute error < tol."""
    _require(tol > 0.0, "survival: tol must be positive")
    if x <= 0:
        return 1.0
    if isinstance(spec, Binomial):
        if x > spec.n:
            return 0.0
        f = np.exp(_log_pmf_block(spec, spec.n + 1))
        return float(np.sum(f[x:][::-1]))
    if isinstance(spec, DiscreteWeibull):
        return math.exp(-((x / spec.alpha) ** spec.beta))
    if isinstance(spec, HurwitzLerch) and spec.z == 1.0:
        T = hl_normalizer(1.0, spec.s, spec.a)
        return float(sc.zeta(spec.s + 1.0, spec.a + 1.0 + x)) / T

    target = min(tol * 0.5, 1e-16)
    M = max(min(_start_hint(spec, min(tol, 1e-12)), MAX_TERMS), x + 1)
    while True:
        rho = _tail_ratio_bound(spec, M)
        logf = _log_pmf_block(spec, M + 1)
        f = np.exp(logf)
        if rho < 1.0 and f[M] / (1.0 - rho) <= target:
            return float(np.sum(f[x:M][::-1]) + f[M])
        if M >= MAX_TERMS:
            raise ConvergenceError(f"survival({family_name(spec)}, {x}) did not reach tol={tol}")
        M = min(2 * M, MAX_TERMS)


def mean_with_error(spec: FamilySpec, tol: float = 1e-9):
    """(mean, certified absolute error) on the internal 0-based support.

    Closed forms everywhere except the discrete Weibull, whose mean is a
    summed survival series; there the error is whatever the truncation cap
    allows, which can exceed tol for very small beta.
    """
    if isinstance(spec, Poisson):
        return spec.lam, 4.0 * _EPS * spec.lam
    if isinstance(spec, Binomial):
        return spec.n * spec.p, 4.0 * _EPS * spec.n * spec.p
    if isinstance(spec, NegBinomial):
        m = spec.r * (1.0 - spec.p) / spec.p
        return m, 4.0 * _EPS * m
    if isinstance(spec, GeneralizedPoisson):
        m = spec.theta / (1.0 - spec.lam)
        return m, 4.0 * _EPS * m
    if isinstance(spec, HurwitzLerch):
        if spec.z == 1.0 and spec.s <= 1.0:
            return math.inf, math.inf
        T1 = hl_normalizer(spec.z, spec.s - 1.0, spec.a, tol=1e-15 * max(1.0, _hl_T_scale(spec)))
        T0 = hl_normalizer(spec.z, spec.s, spec.a, tol=1e-16 * max(1.0, _hl_T_scale(spec)))
        m_native = T1 / T0 - spec.a
        m = m_native - 1.0  # internal 0-based support
        return m, max(1e-12 * abs(m_native), 4.0 * _EPS)
    if isinstance(spec, DiscreteWeibull):
        return _weibull_mean(spec, tol)
    raise TypeError(f"unknown family: {spec!r}")


def _weibull_mean(spec: DiscreteWeibull, tol: float):
    # E[X] = sum_{x>=1} S(x).  Refine the horizon until the excess bound
    # meets tol; when even the default horizon exceeds the term cap, fall
    # back to coarser horizons and report the wider certified error.
    def from_truncation(p: TruncatedPmf):
        x = np.arange(1, len(p.probs) + 1, dtype=float)
        s_vals = np.exp(-((x / spec.alpha) ** spec.beta))
        total = float(np.sum(s_vals[::-1]))
        err = p.tail_excess_bound / 2.0 + _EPS * len(p.probs) * max(total, 1.0)
        return total + p.tail_excess_bound / 2.0, err

    best = None
    for tt in (1e-12, 1e-13, 1e-14, 1e-15):
        try:
            p = truncate(spec, tail_tol=tt)
        except ConvergenceError:
            break
        cand = from_truncation(p)
        if best is None or cand[1] < best[1]:
            best = cand
        if cand[1] < tol:
            return cand
    if best is not None:
        return best
    for tt in (1e-9, 1e-6, 1e-4, 1e-2):
        try:
            return from_truncation(truncate(spec, tail_tol=tt))
        except ConvergenceError:
            continue
    raise ConvergenceError(
        f"mean(dweibull(alpha={spec.alpha}, beta={spec.beta})) cannot converge under the term cap")


def mean(spec: FamilySpec, tol: float = 1e-9) -> float:
    """Mean on the internal 0-based support, absolute error < tol.

    Raises ConvergenceError when the requested tolerance is unattainable
    under the term cap; mean_with_error never raises for that reason.
    """
    m, err = mean_with_error(spec, tol)
    if math.isinf(m):
        return m
    if err > tol:
        raise ConvergenceError(f"mean({format_family(spec)}): certified error {err:.2e} exceeds tol={tol}")
    return m


# ---------------------------------------------------------------------------
# Text forms


_SPEC_RE = re.compile(r"^\s*([a-z]+)\s*\(\s*([^()]*)\s*\)\s*$")

_ARITY = {
    "poisson": 1,
    "binomial": 2,
    "negbinomial": 2,
    "dweibull": 2,
    "gpoisson": 2,
    "hurwitzlerch": 3,
}


def _as_int(text: str, what: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise ParameterError(f"{what}: not a number: {text!r}")
    if v != int(v):
        raise ParameterError(f"{what}: must be an integer, got {text}")
    return int(v)


def _as_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"{what}: not a number: {text!r}")


def parse_family(text: str) -> FamilySpec:
    """Parse a spec like 'poisson(1.5)' or 'binomial(10, 0.3)' (case-insensitive)."""
    m = _SPEC_RE.match(text.lower())
    if m is None:
        raise ParameterError(f"cannot parse family spec: {text!r}")
    name, argstr = m.group(1), m.group(2)
    if name not in _ARITY:
        raise ParameterError(f"unknown family {name!r}; expected one of {sorted(_ARITY)}")
    args = [a.strip() for a in argstr.split(",")] if argstr.strip() else []
    if len(args) != _ARITY[name]:
        raise ParameterError(f"{name} takes {_ARITY[name]} parameter(s), got {len(args)}")
    if name == "poisson":
        return Poisson(_as_float(args[0], "poisson lambda"))
    if name == "binomial":
        return Binomial(_as_int(args[0], "binomial n"), _as_float(args[1], "binomial p"))
    if name == "negbinomial":
        return NegBinomial(_as_int(args[0], "negbinomial r"), _as_float(args[1], "negbinomial p"))
    if name == "dweibull":
        return DiscreteWeibull(_as_float(args[0], "dweibull alpha"), _as_float(args[1], "dweibull beta"))
    if name == "gpoisson":
        return GeneralizedPoisson(_as_float(args[0], "gpoisson theta"), _as_float(args[1], "gpoisson lambda"))
    return HurwitzLerch(_as_float(args[0], "hurwitzlerch z"), _as_float(args[1], "hurwitzlerch s"),
                        _as_float(args[2], "hurwitzlerch a"))


def format_family(spec: FamilySpec) -> str:
    """Canonical text form; parse_family(format_family(s)) == s."""
    name = family_name(spec)
    if isinstance(spec, Poisson):
        params = [spec.lam]
    elif isinstance(spec, Binomial):
        params = [spec.n, spec.p]
    elif isinstance(spec, NegBinomial):
        params = [spec.r, spec.p]
    elif isinstance(spec, DiscreteWeibull):
        params = [spec.alpha, spec.beta]
    elif isinstance(spec, GeneralizedPoisson):
        params = [spec.theta, spec.lam]
    else:
        params = [spec.z, spec.s, spec.a]
    return f"{name}({','.join(repr(p) for p in params)})"
