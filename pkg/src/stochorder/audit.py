"""Randomized cross-validation of closed-form verdicts against the oracle.

A closed-form verdict expands into claims about the individual relations
through the implication chain (a strong order holding pulls the weaker ones
with it; a weak order failing pulls the stronger ones down), and every claim
is checked against the numeric verdict on a shared truncation window.  An
oracle Inconclusive excuses the claim; a claimed failure that the window
cannot exhibit (infinite support, so the violation may sit past the horizon)
is excused as well and counted separately.  Everything else that differs is
a disagreement, reported with enough data to reproduce it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .criteria import GUARD_BAND, CriterionVerdict, compare_pair, predict_survival_ratio_shape
from .errors import ConsistencyError, ConvergenceError
from .families import (
    Binomial,
    DiscreteWeibull,
    FamilySpec,
    GeneralizedPoisson,
    HurwitzLerch,
    NegBinomial,
    Poisson,
    TruncatedPmf,
    format_family,
    mean_with_error,
    origin_shift,
)
from .orders import aligned_pmf, aligned_survival, check_all, truncate_pair
from .shape import classify_robust, likelihood_ratio

FAMILIES = ("poisson", "binomial", "negbinomial", "dweibull", "gpoisson",
            "hurwitzlerch")

HOLDS, FAILS = "Holds", "Fails"

# relations certified alongside a Holds / dragged down by a Fails
_HOLDS_CLOSURE = {"lr": ("lr", "hr", "mrl", "st"),
                  "hr": ("hr", "mrl", "st"),
                  "mrl": ("mrl",)}
_FAILS_CLOSURE = {"lr": ("lr",),
                  "hr": ("hr", "lr"),
                  "mrl": ("mrl", "hr", "lr"),
                  "st": ("st", "hr", "lr")}


def claims_from_verdict(v: CriterionVerdict) -> Dict[str, str]:
    """Expand one verdict into per-relation claims, side facts included.

    The result speaks about the direction the verdict speaks about.  A
    NotApplicable verdict claims nothing.
    """
    claims: Dict[str, str] = {}
    if v.outcome == HOLDS:
        for rel in _HOLDS_CLOSURE[v.relation]:
            claims[rel] = HOLDS
    elif v.outcome == FAILS:
        for rel in _FAILS_CLOSURE[v.relation]:
            claims[rel] = FAILS
    else:
        return claims
    for fact in v.side_facts:
        if not fact.endswith("fails"):
            continue  # free-form diagnostics ride along with the verdict
        rel = fact.split()[0]
        for weaker in _FAILS_CLOSURE[rel]:
            if claims.get(weaker) == HOLDS:
                raise ConsistencyError(
                    f"verdict {v.branch} contradicts itself: {weaker} claimed "
                    "to hold and to fail")
            claims[weaker] = FAILS
    return claims


# ---------------------------------------------------------------------------
# random parameter draws (ranges sized so truncation stays under the cap)


def draw_spec(family: str, rng: np.random.Generator) -> FamilySpec:
    if family == "poisson":
        return Poisson(float(rng.uniform(0.05, 20.0)))
    if family == "binomial":
        return Binomial(int(rng.integers(1, 51)), float(rng.uniform(0.02, 0.98)))
    if family == "negbinomial":
        return NegBinomial(int(rng.integers(1, 51)), float(rng.uniform(0.02, 0.98)))
    if family == "dweibull":
        # the survival base must stay inside (0, 1)
        return DiscreteWeibull(float(rng.uniform(0.05, 0.95)),
                               float(rng.uniform(0.1, 3.0)))
    if family == "gpoisson":
        return GeneralizedPoisson(float(rng.uniform(0.05, 20.0)),
                                  float(rng.uniform(0.02, 0.95)))
    if family == "hurwitzlerch":
        return HurwitzLerch(float(rng.uniform(0.05, 0.95)),
                            float(rng.uniform(0.0, 4.0)),
                            float(rng.uniform(0.0, 1.0)))
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# per-pair claim checking


@dataclass(frozen=True)
class Disagreement:
    spec_x: str
    spec_y: str
    relation: str
    direction: str
    branch: str
    claimed: str
    oracle: str
    witness: Optional[int]
    certified_error: float

    def as_dict(self):
        return {"spec_x": self.spec_x, "spec_y": self.spec_y,
                "relation": self.relation, "direction": self.direction,
                "branch": self.branch, "claimed": self.claimed,
                "oracle": self.oracle, "witness": self.witness,
                "certified_error": self.certified_error}


@dataclass
class AuditReport:
    family: str
    n_pairs: int
    seed: int
    pairs_checked: int = 0
    skipped_convergence: int = 0
    claims_checked: int = 0
    inconclusive_excused: int = 0
    fails_excused: int = 0
    branch_counts: Counter = field(default_factory=Counter)
    disagreements: List[Disagreement] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_dict(self):
        return {"family": self.family, "n_pairs": self.n_pairs,
                "seed": self.seed, "pairs_checked": self.pairs_checked,
                "skipped_convergence": self.skipped_convergence,
                "claims_checked": self.claims_checked,
                "inconclusive_excused": self.inconclusive_excused,
                "fails_excused": self.fails_excused,
                "branch_counts": dict(sorted(self.branch_counts.items())),
                "disagreements": [d.as_dict() for d in self.disagreements],
                "ok": self.ok}


def check_pair_claims(x: FamilySpec, y: FamilySpec,
                      verdicts: Tuple[CriterionVerdict, ...],
                      fwd_oracle, rev_oracle,
                      report: AuditReport) -> None:
    """Check every claim of every verdict against the oracle verdicts."""
    for v in verdicts:
        report.branch_counts[f"{v.branch} {v.relation} {v.outcome}"] += 1
        oracle = fwd_oracle if v.direction == "forward" else rev_oracle
        sx, sy = (x, y) if v.direction == "forward" else (y, x)
        for rel, claimed in sorted(claims_from_verdict(v).items()):
            report.claims_checked += 1
            ov = oracle[rel]
            if ov.outcome == "Inconclusive":
                report.inconclusive_excused += 1
                continue
            if claimed == ov.outcome:
                continue
            if claimed == FAILS and ov.outcome == HOLDS:
                # an oracle Holds only certifies the absence of violations
                # beyond its error band inside the window; a real failure
                # may sit past the horizon or below that resolution
                report.fails_excused += 1
                continue
            report.disagreements.append(Disagreement(
                spec_x=format_family(sx), spec_y=format_family(sy),
                relation=rel, direction=v.direction, branch=v.branch,
                claimed=claimed, oracle=ov.outcome, witness=ov.witness,
                certified_error=ov.certified_error))


def audit_family(family: str, n_pairs: int, seed: int,
                 band: float = GUARD_BAND, tol: float = 1e-12,
                 tail_tol: float = 1e-12,
                 max_terms: int = 10 ** 6) -> AuditReport:
    """Draw random same-family pairs and check criteria against the oracle.

    Deterministic for a fixed seed.  Pairs whose truncation cannot
    converge inside max_terms are counted as skipped, not failed.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    rng = np.random.default_rng(seed)
    report = AuditReport(family=family, n_pairs=n_pairs, seed=seed)
    for _ in range(n_pairs):
        x = draw_spec(family, rng)
        y = draw_spec(family, rng)
        try:
            tx, ty = truncate_pair(x, y, tail_tol, max_terms)
            verdicts = compare_pair(x, y, band, tail_tol, max_terms)
            fwd = check_all(tx, ty, tol)
            rev = check_all(ty, tx, tol)
        except ConvergenceError:
            report.skipped_convergence += 1
            continue
        check_pair_claims(x, y, verdicts, fwd, rev, report)
        report.pairs_checked += 1
    return report


# ---------------------------------------------------------------------------
# implication-chain sweep over mixed pairs


@dataclass
class ChainReport:
    n_pairs: int
    seed: int
    pairs_checked: int = 0
    skipped_convergence: int = 0
    mean_checks: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self):
        return {"n_pairs": self.n_pairs, "seed": self.seed,
                "pairs_checked": self.pairs_checked,
                "skipped_convergence": self.skipped_convergence,
                "mean_checks": self.mean_checks,
                "violations": list(self.violations), "ok": self.ok}


def _natural_mean_err(spec: FamilySpec):
    m, e = mean_with_error(spec)
    return m + origin_shift(spec), e


def chain_sweep(n_pairs: int, seed: int, tol: float = 1e-12,
                tail_tol: float = 1e-12, max_terms: int = 10 ** 6) -> ChainReport:
    """Random cross- and within-family pairs through the oracle.

    check_all verifies the implication chain internally on every call and
    raises on a certified violation; this sweep adds the mean-ordering edge:
    a certified mrl or st Holds must not coexist with a mean reversal beyond
    the certified numerical slack.
    """
    rng = np.random.default_rng(seed)
    report = ChainReport(n_pairs=n_pairs, seed=seed)
    for _ in range(n_pairs):
        fx = FAMILIES[int(rng.integers(0, len(FAMILIES)))]
        fy = FAMILIES[int(rng.integers(0, len(FAMILIES)))]
        x, y = draw_spec(fx, rng), draw_spec(fy, rng)
        try:
            tx, ty = truncate_pair(x, y, tail_tol, max_terms)
            res = check_all(tx, ty, tol)
        except ConvergenceError:
            report.skipped_convergence += 1
            continue
        report.pairs_checked += 1
        if res["mrl"].outcome == HOLDS or res["st"].outcome == HOLDS:
            mx, ex = _natural_mean_err(x)
            my, ey = _natural_mean_err(y)
            report.mean_checks += 1
            slack = (ex + ey + tx.tail_excess_bound + ty.tail_excess_bound
                     + 1e-9 * max(1.0, abs(mx), abs(my)))
            if mx > my + slack:
                which = "mrl" if res["mrl"].outcome == HOLDS else "st"
                report.violations.append(
                    f"{format_family(x)} vs {format_family(y)}: {which} holds "
                    f"but mean {mx!r} > {my!r} beyond slack {slack!r}")
    return report


# ---------------------------------------------------------------------------
# shape-theorem sweeps (the l(0) dichotomy and the unimodal-survival rule)


def _certified_survival_ratio(tx: TruncatedPmf, ty: TruncatedPmf,
                              tie_tol: float = 1e-9):
    """Survival ratio restricted to the leading run where both curves carry
    a small certified relative error; None when too short to classify."""
    sx, sy, ex, ey = aligned_survival(tx, ty)
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (sx > 0.0) & (sy > 0.0)
        rel = np.where(ok, ex / np.where(ok, sx, 1.0) + ey / np.where(ok, sy, 1.0),
                       np.inf)
    usable = ok & (rel <= 0.3 * tie_tol)
    cut = int(np.argmin(usable)) if not bool(np.all(usable)) else len(usable)
    if cut < 3:
        return None
    return sx[:cut] / sy[:cut]


def t1_case(tx: TruncatedPmf, ty: TruncatedPmf, band: float = GUARD_BAND,
            tie_tol: float = 1e-9):
    """Theorem check for one pair: the pmf-ratio start predicts the
    survival-ratio shape.

    None when the pair is out of scope (no containment, ratio not
    certifiably strictly unimodal, start inside the band, or the survival
    ratio cannot be certified); otherwise (predicted, observed, ok).
    """
    fx, fy, _, _ = aligned_pmf(tx, ty)
    rc = likelihood_ratio(fx, fy)
    if np.any(np.isnan(rc.values)):
        return None
    predicted = predict_survival_ratio_shape(rc.values, rc.numeric_containment,
                                             band, tie_tol)
    if predicted is None:
        return None
    ratio = _certified_survival_ratio(tx, ty, tie_tol)
    if ratio is None:
        return None
    shape, certified = classify_robust(ratio, tie_tol)
    if not certified:
        return None
    if predicted == "decreasing":
        ok = shape.label in ("decreasing", "constant")
    else:
        # a peak at or past the window end presents as increasing
        ok = shape.label in ("unimodal", "increasing")
    return predicted, shape.label, ok


def t2_case(x: FamilySpec, y: FamilySpec, tx: TruncatedPmf, ty: TruncatedPmf,
            oracle_mrl_outcome: str, tie_tol: float = 1e-9,
            mean_rel_tol: float = 1e-9):
    """Unimodal-survival-ratio rule for one pair: oracle mrl iff means.

    None when out of scope (ratio not certifiably unimodal, oracle
    inconclusive, or means too close to resolve); else (mrl_holds,
    means_ordered, ok).
    """
    ratio = _certified_survival_ratio(tx, ty, tie_tol)
    if ratio is None:
        return None
    shape, certified = classify_robust(ratio, tie_tol)
    if not certified or shape.label != "unimodal":
        return None
    if oracle_mrl_outcome == "Inconclusive":
        return None
    mx, ex = _natural_mean_err(x)
    my, ey = _natural_mean_err(y)
    if not (np.isfinite(mx) and np.isfinite(my)):
        return None
    if abs(mx - my) <= mean_rel_tol * max(abs(mx), abs(my)) + ex + ey:
        return None
    mrl_holds = oracle_mrl_outcome == HOLDS
    means_ordered = mx < my
    return mrl_holds, means_ordered, mrl_holds == means_ordered
