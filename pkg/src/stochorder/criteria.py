"""Closed-form order decisions from family parameters.

Every comparison here answers "is the first distribution dominated by the
second" for one of the transitive relations lr, hr, mrl.  A verdict names
the condition block that decided it (the `branch` token reported in JSON
output), carries side facts that follow from the decided block by theorem
(a weaker relation failing, the usual stochastic order failing in both
senses), and stays honest at knife edges: any decisive comparison landing
inside a relative guard band returns NotApplicable instead of guessing a
side.

Condition stacks run strongest relation first (lr, then hr, then mrl) and
short-circuit on the first satisfied block.  When every block fails, the
verdict is a Fails at the deepest level reached, which for the families
here is a complete characterization and not merely an absence of proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .families import (
    Binomial,
    DiscreteWeibull,
    FamilySpec,
    GeneralizedPoisson,
    HurwitzLerch,
    MAX_TERMS,
    NegBinomial,
    Poisson,
    TruncatedPmf,
    family_name,
    hl_normalizer,
    mean_with_error,
    origin_shift,
    panjer_coefficients,
    upper_support,
)
from .orders import aligned_pmf, aligned_survival, truncate_pair
from .shape import classify_robust, likelihood_ratio

GUARD_BAND = 1e-9

RELATION_LEVELS = ("lr", "hr", "mrl")
DIRECTIONS = ("forward", "reverse")
OUTCOMES = ("Holds", "Fails", "NotApplicable")

# side-fact tokens understood by the audit layer
LR_FAILS = "lr fails"
HR_FAILS = "hr fails"
MRL_FAILS = "mrl fails"
ST_FAILS = "st fails"


@dataclass(frozen=True)
class CriterionVerdict:
    relation: str
    direction: str
    outcome: str
    branch: str
    side_facts: Tuple[str, ...] = ()
    reason: str = ""

    def __post_init__(self):
        if self.relation not in RELATION_LEVELS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")

    def flipped(self) -> "CriterionVerdict":
        d = "reverse" if self.direction == "forward" else "forward"
        return replace(self, direction=d)


def _holds(relation, branch, sides=(), reason=""):
    return CriterionVerdict(relation, "forward", "Holds", branch, tuple(sides), reason)


def _fails(relation, branch, sides=(), reason=""):
    return CriterionVerdict(relation, "forward", "Fails", branch, tuple(sides), reason)


def _boundary(relation, branch, reason):
    return CriterionVerdict(relation, "forward", "NotApplicable", branch, (),
                            "boundary: " + reason)


def _na(relation, branch, reason):
    return CriterionVerdict(relation, "forward", "NotApplicable", branch, (), reason)


# ---------------------------------------------------------------------------
# guarded comparisons

LT, EQ, GT, NEAR = "lt", "eq", "gt", "near"
INDET = "indet"  # only _cmp_means: both means diverge

# A tie inside the guard band satisfies a non-strict condition line written
# in exact parameter arithmetic: the printed conditions put equality on the
# granting side, and float rounding must not push an exact tie off it.
# Ties on strict branch gates, and on quantities that carry their own
# computation error (summed means, ratio values read off a truncation),
# stay undecided instead.
SOFT_LE = (LT, EQ, NEAR)
SOFT_GE = (GT, EQ, NEAR)


def cmp3(a: float, b: float, band: float = GUARD_BAND, extra: float = 0.0) -> str:
    """Trichotomy of a vs b with a relative guard band.

    EQ only on exact float equality; NEAR when the gap is inside
    band * max(|a|, |b|) + extra, where extra widens the band by any
    certified numerical error the operands carry.
    """
    if math.isnan(a) or math.isnan(b):
        raise ValueError("cmp3: nan operand")
    if a == b:
        return EQ
    if math.isinf(a) or math.isinf(b):
        return GT if a > b else LT
    if abs(a - b) <= band * max(abs(a), abs(b)) + extra:
        return NEAR
    return GT if a > b else LT


def cmp3_log(dlog: float, band: float = GUARD_BAND) -> str:
    """Trichotomy of a ratio given its log.  The absolute band on the log
    scale matches a relative band on the underlying ratio around 1."""
    if math.isnan(dlog):
        raise ValueError("cmp3_log: nan log difference")
    if dlog == 0.0:
        return EQ
    if abs(dlog) <= band:
        return NEAR
    return GT if dlog > 0.0 else LT


def _cmp_means(mx, ex, my, ey, band):
    if math.isinf(mx) and math.isinf(my):
        return INDET  # both diverge; ordering undecidable from the values
    return cmp3(mx, my, band, extra=ex + ey)


# ---------------------------------------------------------------------------
# shape-theorem primitives


def predict_survival_ratio_shape(ratio_values, containment: bool,
                                 band: float = GUARD_BAND,
                                 tie_tol: float = 1e-9) -> Optional[str]:
    """Predicted shape of S_X/S_Y from a unimodal pmf ratio.

    Requires support containment and a certifiably unimodal ratio;
    "decreasing" when the ratio starts at or above 1, "unimodal" when it
    starts below.  None when the preconditions fail or the start sits
    inside the guard band.
    """
    if not containment:
        return None
    vals = np.asarray(ratio_values, dtype=float)
    if len(vals) == 0 or np.any(np.isnan(vals)):
        return None
    shape, certified = classify_robust(vals, tie_tol)
    if not certified or shape.label != "unimodal":
        return None
    c = cmp3(float(vals[0]), 1.0, band)
    if c == NEAR:
        return None
    return "decreasing" if c in (GT, EQ) else "unimodal"


def decide_from_unimodal_ratio(tx: TruncatedPmf, ty: TruncatedPmf,
                               mean_x: float, err_x: float,
                               mean_y: float, err_y: float,
                               band: float = GUARD_BAND,
                               tie_tol: float = 1e-9) -> CriterionVerdict:
    """Decision for a pair whose pmf ratio is strictly unimodal with
    containment: hr holds exactly when the ratio starts at or above 1;
    below 1 the mean comparison settles mrl either way, and the usual
    stochastic order fails in both senses.
    """
    fx, fy, _, _ = aligned_pmf(tx, ty)
    rc = likelihood_ratio(fx, fy)
    if not rc.numeric_containment:
        return _na("hr", "Cor1", "support containment fails: first pmf has mass "
                                 "where the second is dead")
    vals = rc.values
    if np.any(np.isnan(vals)):
        return _na("hr", "Cor1", "pmf ratio has dead interior points")
    shape, certified = classify_robust(vals, tie_tol)
    if not certified or shape.label != "unimodal":
        return _na("hr", "Cor1",
                   f"pmf ratio classifies {shape.label}{'' if certified else ' (uncertified)'}, "
                   "not strictly unimodal")
    l0 = float(vals[0])
    c = cmp3(l0, 1.0, band)
    if c == NEAR:
        return _boundary("hr", "Cor1(i)", f"ratio start {l0!r} within guard band of 1")
    if c in (GT, EQ):
        return _holds("hr", "Cor1(i)", (LR_FAILS,),
                      f"unimodal pmf ratio starting at {l0:.6g} >= 1")
    cm = _cmp_means(mean_x, err_x, mean_y, err_y, band)
    if cm == NEAR:
        return _boundary("mrl", "Cor1(ii)", "means within guard band")
    if cm == INDET:
        return _boundary("mrl", "Cor1(ii)", "means not finite")
    if cm in (LT, EQ):
        return _holds("mrl", "Cor1(ii)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"ratio starts below 1 and mean {mean_x:.6g} <= {mean_y:.6g}")
    return _fails("mrl", "T2", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"ratio starts below 1 but mean {mean_x:.6g} > {mean_y:.6g}")


def decide_from_logconcave_ratio(l0: float, ratio10: float, terminal_ratio: float,
                                 mean_x: float, err_x: float,
                                 mean_y: float, err_y: float,
                                 upper_x: float, upper_y: float,
                                 band: float = GUARD_BAND) -> CriterionVerdict:
    """Decision for a log-concave pmf ratio described by its endpoints.

    l0 is the ratio at the origin, ratio10 the first successive-ratio step
    l(1)/l(0), terminal_ratio the limiting step.  Log-concavity makes the
    steps nonincreasing, so lr holds exactly when ratio10 <= 1.  When it
    does not, a finite-vs-longer support or a terminal step below 1 pins
    the ratio shape and the start value decides hr, then means decide mrl.
    """
    if upper_x > upper_y:
        return _na("lr", "P2", "support of the first argument extends beyond the second")
    c1 = cmp3(ratio10, 1.0, band)
    if c1 in SOFT_LE:
        return _holds("lr", "P2(i)", (), f"l(1)/l(0) = {ratio10:.6g} <= 1")
    if upper_x == upper_y:
        ct = cmp3(terminal_ratio, 1.0, band)
        if ct == NEAR:
            return _fails("lr", "P2(i)", (),
                          "l(1)/l(0) > 1; terminal step within guard band of 1, "
                          "deeper conditions not applicable")
        if ct in (GT, EQ):
            return _fails("lr", "P2(i)", (),
                          "l(1)/l(0) > 1 and the ratio never turns back down; "
                          "deeper conditions not applicable")
    c2 = cmp3(l0, 1.0, band)
    if c2 in SOFT_GE:
        return _holds("hr", "P2(ii.a)", (LR_FAILS,), f"l(0) = {l0:.6g} >= 1")
    cm = _cmp_means(mean_x, err_x, mean_y, err_y, band)
    if cm == INDET:
        return _boundary("mrl", "P2(ii.b)", "means not finite")
    if cm in SOFT_LE:
        return _holds("mrl", "P2(ii.b)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"l(0) = {l0:.6g} < 1 and mean {mean_x:.6g} <= {mean_y:.6g}")
    return _fails("mrl", "P2(ii.b)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"l(0) = {l0:.6g} < 1 but mean {mean_x:.6g} > {mean_y:.6g}")


# ---------------------------------------------------------------------------
# Panjer-class comparisons


def _poisson_stack(x: Poisson, y: Poisson, band: float) -> CriterionVerdict:
    c = cmp3(x.lam, y.lam, band)
    if c in SOFT_LE:
        return _holds("lr", "(a)", (), f"lambda {x.lam:.6g} <= {y.lam:.6g}")
    # larger rate: the reverse ordering is strict, so every forward
    # relation fails, means included
    return _fails("lr", "(a)", (HR_FAILS, MRL_FAILS, ST_FAILS),
                  f"lambda {x.lam:.6g} > {y.lam:.6g}")


def _binomial_stack(x: Binomial, y: Binomial, band: float) -> CriterionVerdict:
    n1, p1, n2, p2 = x.n, x.p, y.n, y.p  # caller guarantees n1 <= n2
    c1 = cmp3(n1 * p1 * (1.0 - p2), n2 * p2 * (1.0 - p1), band)
    if c1 in SOFT_LE:
        return _holds("lr", "(b.1)",
                      (), f"{n1}*{p1:.6g}*(1-{p2:.6g}) <= {n2}*{p2:.6g}*(1-{p1:.6g})")
    c2 = cmp3(n1 * math.log1p(-p1), n2 * math.log1p(-p2), band)
    if c2 in SOFT_GE:
        return _holds("hr", "(b.2)", (LR_FAILS,),
                      "(1-p1)^n1 >= (1-p2)^n2 with the odds product reversed")
    c3 = cmp3(n1 * p1, n2 * p2, band)
    if c3 in SOFT_LE:
        return _holds("mrl", "(b.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"mean {n1 * p1:.6g} <= {n2 * p2:.6g} with hr already failed")
    return _fails("mrl", "(b.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"mean {n1 * p1:.6g} > {n2 * p2:.6g}")


def _negbinomial_stack(x: NegBinomial, y: NegBinomial, band: float) -> CriterionVerdict:
    r1, p1, r2, p2 = x.r, x.p, y.r, y.p  # caller guarantees r1 >= r2
    c1 = cmp3(r1 * (1.0 - p1), r2 * (1.0 - p2), band)
    if c1 in SOFT_LE:
        return _holds("lr", "(c.1)", (),
                      f"{r1}*(1-{p1:.6g}) <= {r2}*(1-{p2:.6g})")
    cp = cmp3(p1, p2, band)
    if cp == NEAR:
        return _boundary("hr", "(c.2)", "success probabilities within guard band")
    if cp in (LT, EQ):
        # p1 <= p2 while r1(1-p1) > r2(1-p2) forces a strict mean
        # violation, so everything downstream fails as well
        return _fails("mrl", "(c.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"p1 {p1:.6g} <= p2 {p2:.6g} blocks every deeper condition "
                      "and reverses the means")
    c2 = cmp3(r1 * math.log(p1), r2 * math.log(p2), band)
    if c2 in SOFT_GE:
        return _holds("hr", "(c.2)", (LR_FAILS,),
                      "p1^r1 >= p2^r2 with p1 > p2")
    c3 = cmp3(r1 * (1.0 - p1) * p2, r2 * (1.0 - p2) * p1, band)
    if c3 in SOFT_LE:
        return _holds("mrl", "(c.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      "mean ordering r1(1-p1)/p1 <= r2(1-p2)/p2 with hr already failed")
    return _fails("mrl", "(c.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  "mean ordering reversed")


def panjer_compare(x: FamilySpec, y: FamilySpec,
                   band: float = GUARD_BAND) -> CriterionVerdict:
    """Closed-form comparison of two recursion-class distributions.

    Same-family pairs use the family's own condition stack under its
    normalization (binomial n1 <= n2, negative binomial r1 >= r2); a swap
    flips the verdict's direction.  Cross-family pairs go through the
    log-concave ratio decision with the recursion coefficients.
    """
    cx, cy = panjer_coefficients(x), panjer_coefficients(y)
    if cx is None or cy is None:
        raise ValueError("panjer_compare: both specs must be recursion-class "
                         f"(got {family_name(x)}, {family_name(y)})")
    if isinstance(x, Poisson) and isinstance(y, Poisson):
        return _poisson_stack(x, y, band)
    if isinstance(x, Binomial) and isinstance(y, Binomial):
        if x.n <= y.n:
            return _binomial_stack(x, y, band)
        return _binomial_stack(y, x, band).flipped()
    if isinstance(x, NegBinomial) and isinstance(y, NegBinomial):
        if x.r >= y.r:
            return _negbinomial_stack(x, y, band)
        return _negbinomial_stack(y, x, band).flipped()

    (a1, b1, logf0_1), (a2, b2, logf0_2) = cx, cy
    clc = cmp3(a1 * b2, a2 * b1, band)
    if clc == NEAR:
        return _boundary("lr", "P2", "log-concavity test within guard band")
    if clc == GT:
        return _na("lr", "P2", "pmf ratio is not log-concave for this pair")
    u_x, u_y = upper_support(x), upper_support(y)
    if math.isinf(u_x) and math.isinf(u_y):
        if a1 > 0.0 and a2 > 0.0:
            terminal = a1 / a2
        elif a1 == 0.0 and a2 == 0.0:
            terminal = b1 / b2
        elif a2 == 0.0:
            terminal = math.inf
        else:
            terminal = 0.0
    else:
        k = min(u_x, u_y)
        terminal = (a1 * k + b1) / (a2 * k + b2)
    mean_x, err_x = mean_with_error(x)
    mean_y, err_y = mean_with_error(y)
    dlog0 = logf0_1 - logf0_2
    # extreme parameter gaps can push the mass ratio at zero past float range
    l0 = math.exp(dlog0) if dlog0 < 700.0 else math.inf
    return decide_from_logconcave_ratio(
        l0=l0,
        ratio10=(a1 + b1) / (a2 + b2),
        terminal_ratio=terminal,
        mean_x=mean_x, err_x=err_x, mean_y=mean_y, err_y=err_y,
        upper_x=u_x, upper_y=u_y, band=band)


# ---------------------------------------------------------------------------
# discrete Weibull


def weibull_compare(x: DiscreteWeibull, y: DiscreteWeibull,
                    mean_x: float, err_x: float, mean_y: float, err_y: float,
                    band: float = GUARD_BAND) -> CriterionVerdict:
    """hr holds exactly when alpha1^beta1 <= alpha2^beta2 under the
    beta1 >= beta2 normalization; otherwise the mean comparison settles
    mrl either way, with the survival ratio peaking at a real mode x0
    reported as a diagnostic."""
    if x.beta < y.beta:
        return weibull_compare(y, x, mean_y, err_y, mean_x, err_x, band).flipped()
    a1, b1, a2, b2 = x.alpha, x.beta, y.alpha, y.beta
    sides_extra: Tuple[str, ...] = ()
    if b1 != b2:
        log_x0 = (math.log(b1) + b2 * math.log(a2)
                  - math.log(b2) - b1 * math.log(a1)) / (b2 - b1)
        # keep the diagnostic printable even when the mode is huge
        x0 = math.exp(log_x0) if abs(log_x0) < 700.0 else math.inf
        sides_extra = (f"sratio mode x0={x0:.6g}",)
    c1 = cmp3(b1 * math.log(a1), b2 * math.log(a2), band)
    if c1 in SOFT_LE:
        return _holds("hr", "(5)", sides_extra,
                      f"alpha1^beta1 = {a1 ** b1:.6g} <= {a2 ** b2:.6g} = alpha2^beta2")
    cm = _cmp_means(mean_x, err_x, mean_y, err_y, band)
    if cm == NEAR:
        return _boundary("mrl", "(6)", "means within guard band")
    if cm == INDET:
        return _boundary("mrl", "(6)", "means not finite")
    if cm in (LT, EQ):
        return _holds("mrl", "(6)", (LR_FAILS, HR_FAILS, ST_FAILS) + sides_extra,
                      f"mean {mean_x:.6g} <= {mean_y:.6g} with hr failed")
    return _fails("mrl", "(6)", (LR_FAILS, HR_FAILS, ST_FAILS) + sides_extra,
                  f"mean {mean_x:.6g} > {mean_y:.6g}")


# ---------------------------------------------------------------------------
# generalized Poisson


def gpoisson_compare(x: GeneralizedPoisson, y: GeneralizedPoisson,
                     band: float = GUARD_BAND) -> CriterionVerdict:
    """Condition stack under the lambda1 <= lambda2 normalization; the
    ratio at the origin is exp(theta2 - theta1), which drives the hr/mrl
    split once both lr conditions fail."""
    if x.lam > y.lam:
        return gpoisson_compare(y, x, band).flipped()
    t1, l1, t2, l2 = x.theta, x.lam, y.theta, y.lam
    c1 = cmp3(l2 * t1, l1 * t2, band)
    if c1 in SOFT_LE:
        return _holds("lr", "(7)", (), f"lambda2*theta1 = {l2 * t1:.6g} <= "
                                       f"{l1 * t2:.6g} = lambda1*theta2")
    c2 = cmp3(math.log(t2 / t1), (l2 * t1 - l1 * t2) / (t1 * t2) + l2 - l1, band)
    if c2 in SOFT_GE:
        return _holds("lr", "(8)", (), "log(theta2/theta1) clears the rate gap")
    c3 = cmp3(t1, t2, band)
    if c3 in SOFT_LE:
        return _holds("hr", "(9)", (LR_FAILS,),
                      f"theta1 {t1:.6g} <= theta2 {t2:.6g} with both lr conditions failed")
    c4 = cmp3(t1 * (1.0 - l2), t2 * (1.0 - l1), band)
    if c4 in SOFT_LE:
        return _holds("mrl", "(10)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"theta1*(1-lambda2) = {t1 * (1.0 - l2):.6g} <= "
                      f"{t2 * (1.0 - l1):.6g} = theta2*(1-lambda1)")
    return _fails("mrl", "(10)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  "mean ordering reversed")


# ---------------------------------------------------------------------------
# Hurwitz-Lerch


def _hl_quantities(x: HurwitzLerch, y: HurwitzLerch):
    """Log-space ingredients for the condition blocks, on the native
    1-based support: the ratio at 1, its step to 2, the linearized slope
    comparison, and the normalizer inequality sides."""
    lz1, s1, a1 = math.log(x.z), x.s, x.a
    lz2, s2, a2 = math.log(y.z), y.s, y.a
    lT1 = math.log(hl_normalizer(x.z, x.s, x.a))
    lT2 = math.log(hl_normalizer(y.z, y.s, y.a))
    log_l1 = (lz1 - lz2) + (lT2 - lT1) + (s2 + 1.0) * math.log(a2 + 1.0) \
        - (s1 + 1.0) * math.log(a1 + 1.0)
    dlog_l12 = (lz2 - lz1) + (s1 + 1.0) * math.log((a1 + 2.0) / (a1 + 1.0)) \
        - (s2 + 1.0) * math.log((a2 + 2.0) / (a2 + 1.0))
    lin_left = (s1 + 1.0) / (a1 + 1.0) + (lz2 - lz1)
    lin_right = (s2 + 1.0) / (a2 + 1.0)
    t_left = lT2 + (s2 + 1.0) * math.log(a2 + 1.0) - lz2
    t_right = lT1 + (s1 + 1.0) * math.log(a1 + 1.0) - lz1
    return log_l1, dlog_l12, lin_left, lin_right, t_left, t_right, lT1, lT2


def _hl_means(x: HurwitzLerch, y: HurwitzLerch):
    # reported on the native 1-based support; the shared shift cancels in
    # the comparison either way
    mx, ex = mean_with_error(x)
    my, ey = mean_with_error(y)
    return mx + 1.0, ex, my + 1.0, ey


def _hl_equal_a_stack(x: HurwitzLerch, y: HurwitzLerch, band: float) -> CriterionVerdict:
    # a1 == a2 exactly; the normalizer inequality collapses to a
    # single-exponent threshold
    _, dlog_l12, _, _, _, _, lT1, lT2 = _hl_quantities(x, y)
    a = x.a
    s1, s2 = x.s, y.s
    cz = cmp3(x.z, y.z, band)
    if cz == NEAR:
        return _boundary("lr", "(a.1)", "z values within guard band")
    if cz == GT:
        return _fails("mrl", "(a.3)", (LR_FAILS, HR_FAILS),
                      "z1 > z2 rules out every forward condition")
    cl = cmp3_log(dlog_l12, band)
    if cl in SOFT_GE:
        return _holds("lr", "(a.1)", (), "z1 <= z2 and l(1) >= l(2)")
    t_left = lT2 + (s2 - s1) * math.log(a + 1.0) - math.log(y.z)
    t_right = lT1 - math.log(x.z)
    ct = cmp3_log(t_left - t_right, band)
    if ct in SOFT_GE:
        return _holds("hr", "(a.2)", (LR_FAILS,),
                      "normalizer threshold met with l rising at the origin")
    mx, ex, my, ey = _hl_means(x, y)
    cm = _cmp_means(mx, ex, my, ey, band)
    if cm == NEAR:
        return _boundary("mrl", "(a.3)", "means within guard band")
    if cm == INDET:
        return _boundary("mrl", "(a.3)", "means not finite")
    if cm in (LT, EQ):
        return _holds("mrl", "(a.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"mean {mx:.6g} <= {my:.6g} with hr failed")
    return _fails("mrl", "(a.3)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"mean {mx:.6g} > {my:.6g}")


def _hl_forward_stack(x: HurwitzLerch, y: HurwitzLerch, band: float) -> CriterionVerdict:
    # a1 > a2 strictly
    _, dlog_l12, lin_left, lin_right, t_left, t_right, _, _ = _hl_quantities(x, y)
    cz = cmp3(x.z, y.z, band)
    if cz == NEAR:
        return _boundary("lr", "(11)", "z values within guard band")
    if cz == GT:
        return _fails("mrl", "(16)", (LR_FAILS, HR_FAILS),
                      "z1 > z2 rules out every forward condition")
    clin = cmp3(lin_left, lin_right, band)
    if clin in SOFT_GE:
        return _holds("lr", "(11)", (), "slope condition met with z1 <= z2")
    if cz == EQ:
        cs = cmp3(x.s, y.s, band)
        if cs == NEAR:
            return _boundary("lr", "(13)", "s values within guard band")
        if cs in (LT, EQ):
            return _fails("mrl", "(17)", (LR_FAILS, HR_FAILS),
                          "equal z with s1 <= s2 blocks the remaining forward conditions")
        lr_branch, hr_branch, mrl_branch = "(13)", "(15)", "(17)"
    else:
        lr_branch, hr_branch, mrl_branch = "(12)", "(14)", "(16)"
    cl = cmp3_log(dlog_l12, band)
    if cl in SOFT_GE:
        return _holds("lr", lr_branch, (), "slope reversed but l falls from 1 on")
    ct = cmp3_log(t_left - t_right, band)
    if ct in SOFT_GE:
        return _holds("hr", hr_branch, (LR_FAILS,),
                      "normalizer inequality met with l rising at the origin")
    mx, ex, my, ey = _hl_means(x, y)
    cm = _cmp_means(mx, ex, my, ey, band)
    if cm == NEAR:
        return _boundary("mrl", mrl_branch, "means within guard band")
    if cm == INDET:
        return _boundary("mrl", mrl_branch, "means not finite")
    if cm in (LT, EQ):
        return _holds("mrl", mrl_branch, (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"mean {mx:.6g} <= {my:.6g} with hr failed")
    return _fails("mrl", mrl_branch, (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"mean {mx:.6g} > {my:.6g}")


def _hl_reverse_stack(x: HurwitzLerch, y: HurwitzLerch, band: float) -> CriterionVerdict:
    """Decides y <= x for a normalized pair (a1 > a2), using the dedicated
    reverse conditions rather than an argument swap, which the
    normalization forbids."""
    _, dlog_l12, lin_left, lin_right, t_left, t_right, _, _ = _hl_quantities(x, y)
    cz = cmp3(x.z, y.z, band)
    if cz == NEAR:
        return _boundary("lr", "(rev-a)", "z values within guard band")
    if cz == LT:
        return _fails("mrl", "(rev-c)", (LR_FAILS, HR_FAILS),
                      "z1 < z2 rules out every reverse condition")
    if cz == EQ:
        cs = cmp3(x.s, y.s, band)
        if cs == NEAR:
            return _boundary("lr", "(rev-a)", "s values within guard band")
        if cs in (LT, EQ):
            return _holds("lr", "(rev-a)", (), "equal z with s1 <= s2")
        return _fails("mrl", "(rev-c)", (LR_FAILS, HR_FAILS),
                      "equal z with s1 > s2 blocks every reverse condition")
    clin = cmp3(lin_left, lin_right, band)
    if clin in SOFT_LE:
        return _holds("lr", "(rev-a)", (), "z1 > z2 with the slope condition reversed")
    cl = cmp3_log(dlog_l12, band)
    if cl in SOFT_LE:
        return _holds("lr", "(rev-a)", (), "l rises from 1 on, never above its start")
    ct = cmp3_log(t_left - t_right, band)
    if ct in SOFT_LE:
        return _holds("hr", "(rev-b)", (LR_FAILS,),
                      "normalizer inequality reversed with l falling at the origin")
    mx, ex, my, ey = _hl_means(x, y)
    cm = _cmp_means(mx, ex, my, ey, band)
    if cm == NEAR:
        return _boundary("mrl", "(rev-c)", "means within guard band")
    if cm == INDET:
        return _boundary("mrl", "(rev-c)", "means not finite")
    if cm in (GT, EQ):
        return _holds("mrl", "(rev-c)", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"mean {mx:.6g} >= {my:.6g} with reverse hr failed")
    return _fails("mrl", "(rev-c)", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"mean {mx:.6g} < {my:.6g}")


def hurwitz_lerch_compare(x: HurwitzLerch, y: HurwitzLerch,
                          band: float = GUARD_BAND) -> CriterionVerdict:
    """Closed-form comparison answering x <= y.

    The condition blocks require a1 >= a2; when the pair arrives the
    other way around, the question "x <= y" becomes the reverse-direction
    question of the normalized pair and is answered by the dedicated
    reverse block.
    """
    if x.a == y.a:
        return _hl_equal_a_stack(x, y, band)
    if x.a > y.a:
        return _hl_forward_stack(x, y, band)
    v = _hl_reverse_stack(y, x, band)
    # the reverse stack already speaks about "second <= first" of its own
    # arguments, which is exactly x <= y here
    return v


# ---------------------------------------------------------------------------
# numeric shape routes for pairs without a closed-form stack


def _natural_mean(spec: FamilySpec):
    m, e = mean_with_error(spec)
    return m + origin_shift(spec), e


def _shape_route(x: FamilySpec, y: FamilySpec, band: float,
                 tail_tol: float, max_terms: int,
                 tie_tol: float = 1e-9) -> CriterionVerdict:
    """Shape-theorem decision for a cross-family pair: first try the
    unimodal pmf-ratio route, then the unimodal survival-ratio route."""
    tx, ty = truncate_pair(x, y, tail_tol, max_terms)
    mean_x, err_x = _natural_mean(x)
    mean_y, err_y = _natural_mean(y)
    first = decide_from_unimodal_ratio(tx, ty, mean_x, err_x, mean_y, err_y,
                                       band=band, tie_tol=tie_tol)
    if first.outcome != "NotApplicable":
        return first
    second = _survival_ratio_route(tx, ty, mean_x, err_x, mean_y, err_y,
                                   band, tie_tol)
    if second.outcome != "NotApplicable":
        return second
    # neither route decided; a boundary diagnosis is the more useful report
    return first if first.reason.startswith("boundary") else second


def _survival_ratio_route(tx: TruncatedPmf, ty: TruncatedPmf,
                          mean_x: float, err_x: float,
                          mean_y: float, err_y: float,
                          band: float, tie_tol: float) -> CriterionVerdict:
    sx, sy, ex, ey = aligned_survival(tx, ty)
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (sx > 0.0) & (sy > 0.0)
        rel = np.where(ok, ex / np.where(ok, sx, 1.0) + ey / np.where(ok, sy, 1.0), np.inf)
    usable = ok & (rel <= 0.3 * tie_tol)
    cut = int(np.argmin(usable)) if not bool(np.all(usable)) else len(usable)
    if cut < 3:
        return _na("mrl", "T2", "survival ratio certified on too short a range")
    ratio = sx[:cut] / sy[:cut]
    shape, certified = classify_robust(ratio, tie_tol)
    if not certified or shape.label != "unimodal":
        return _na("mrl", "T2",
                   f"neither pmf ratio nor survival ratio certifiably unimodal "
                   f"(survival ratio: {shape.label})")
    cm = _cmp_means(mean_x, err_x, mean_y, err_y, band)
    if cm == NEAR:
        return _boundary("mrl", "T2", "means within guard band")
    if cm == INDET:
        return _boundary("mrl", "T2", "means not finite")
    if cm in (LT, EQ):
        return _holds("mrl", "T2", (LR_FAILS, HR_FAILS, ST_FAILS),
                      f"unimodal survival ratio and mean {mean_x:.6g} <= {mean_y:.6g}")
    return _fails("mrl", "T2", (LR_FAILS, HR_FAILS, ST_FAILS),
                  f"unimodal survival ratio but mean {mean_x:.6g} > {mean_y:.6g}")


# ---------------------------------------------------------------------------
# dispatcher


def _directed(x: FamilySpec, y: FamilySpec, band: float,
              tail_tol: float, max_terms: int) -> CriterionVerdict:
    if panjer_coefficients(x) is not None and panjer_coefficients(y) is not None:
        return panjer_compare(x, y, band)
    if isinstance(x, DiscreteWeibull) and isinstance(y, DiscreteWeibull):
        mx, ex = mean_with_error(x)
        my, ey = mean_with_error(y)
        return weibull_compare(x, y, mx, ex, my, ey, band)
    if isinstance(x, GeneralizedPoisson) and isinstance(y, GeneralizedPoisson):
        return gpoisson_compare(x, y, band)
    if isinstance(x, HurwitzLerch) and isinstance(y, HurwitzLerch):
        return hurwitz_lerch_compare(x, y, band)
    return _shape_route(x, y, band, tail_tol, max_terms)


def compare_pair(x: FamilySpec, y: FamilySpec, band: float = GUARD_BAND,
                 tail_tol: float = 1e-12,
                 max_terms: int = MAX_TERMS) -> Tuple[CriterionVerdict, ...]:
    """Closed-form verdicts for a pair, both directions.

    Directions are relative to the given argument order: forward speaks
    about x <= y, reverse about y <= x.  Families whose conditions only
    characterize one direction of a normalized pair contribute a single
    verdict; the mirrored evaluation is deduplicated away.
    """
    fwd = _directed(x, y, band, tail_tol, max_terms)
    rev = _directed(y, x, band, tail_tol, max_terms).flipped()
    out = []
    seen = set()
    for v in (fwd, rev):
        key = (v.relation, v.direction, v.outcome, v.branch)
        if key not in seen:
            seen.add(key)
            out.append(v)
    return tuple(out)
