"""Exact numerical verification of stochastic order relations.

All comparisons run in natural coordinates (internal index plus the
family's origin shift) so distributions with different support origins
align correctly.  A finite exactly-enclosed support extends with true
zeros, which stay certified and make failures past the shorter support
detectable; an inexact truncation contributes nothing beyond its horizon,
so the examined window ends where certification ends.

Each relation check is division-free (cross-multiplied) and three-zoned:

* Fails          a violation exceeds tolerance by more than the certified
                 numerical band at that point,
* Inconclusive   violations exist but none clears its band,
* Holds          no point violates beyond tolerance.

A Holds verdict therefore means: no violation exceeding
tol * scale + certified_error exists anywhere in the examined window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ConsistencyError
from .families import MAX_TERMS, FamilySpec, TruncatedPmf, truncate
from .measures import PMF_REL_ERR, mrl_curve, survival_curve

RELATIONS = ("lr", "hr", "mrl", "st")

_Frame = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class OrderVerdict:
    relation: str
    outcome: str  # Holds | Fails | Inconclusive
    witness: Optional[int]  # natural coordinate of the first hard violation
    certified_error: float
    horizon: int  # last natural coordinate examined
    reason: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.outcome not in ("Holds", "Fails", "Inconclusive"):
            raise ValueError(f"unknown outcome {self.outcome!r}")


def _natural_pmf(t: TruncatedPmf) -> Tuple[np.ndarray, np.ndarray]:
    f = np.concatenate((np.zeros(t.origin_shift), t.probs))
    err = PMF_REL_ERR * f
    err[: t.origin_shift] = 0.0
    return f, err


def _natural_survival(t: TruncatedPmf) -> Tuple[np.ndarray, np.ndarray]:
    sc = survival_curve(t)
    s = np.concatenate((np.ones(t.origin_shift), sc.values))
    err = np.concatenate((np.zeros(t.origin_shift), sc.abs_errors))
    return s, err


def _pad(arr: np.ndarray, length: int) -> np.ndarray:
    if len(arr) >= length:
        return arr[:length]
    return np.concatenate((arr, np.zeros(length - len(arr))))


def aligned_pmf(tX: TruncatedPmf, tY: TruncatedPmf) -> _Frame:
    """(fx, fy, efx, efy) over natural coordinates 0..L, where L is the last
    index at which both pmfs are certified (true zeros past an exact
    support count as certified)."""
    fx, efx = _natural_pmf(tX)
    fy, efy = _natural_pmf(tY)
    limits = []
    for t, f in ((tX, fx), (tY, fy)):
        limits.append(math.inf if t.upper_is_exact else len(f) - 1)
    if math.isinf(min(limits)):
        L = max(len(fx), len(fy)) - 1
    else:
        L = int(min(min(limits), max(len(fx), len(fy)) - 1))
    n = L + 1
    return _pad(fx, n), _pad(fy, n), _pad(efx, n), _pad(efy, n)


def aligned_survival(tX: TruncatedPmf, tY: TruncatedPmf) -> _Frame:
    """(sx, sy, esx, esy) over natural coordinates 0..L with the same
    certification rule; an exact support's survival is 0 past its end."""
    sx, esx = _natural_survival(tX)
    sy, esy = _natural_survival(tY)
    limits = []
    for t, s in ((tX, sx), (tY, sy)):
        limits.append(math.inf if t.upper_is_exact else len(s) - 1)
    if math.isinf(min(limits)):
        L = max(len(sx), len(sy)) - 1
    else:
        L = int(min(min(limits), max(len(sx), len(sy)) - 1))
    n = L + 1
    return _pad(sx, n), _pad(sy, n), _pad(esx, n), _pad(esy, n)


def aligned_mrl(tX: TruncatedPmf, tY: TruncatedPmf) -> _Frame:
    """(mx, my, emx, emy) over natural coordinates -1..L-2 (arrays index
    natural x = -1 at position 0), cut to the certified range of both."""
    frames = []
    for t in (tX, tY):
        c = mrl_curve(t)
        v, e = c.values, c.abs_errors
        if t.origin_shift:
            # natural m(-1) = internal m(-1) + origin shift
            v = np.concatenate(([v[0] + t.origin_shift], v))
            e = np.concatenate(([e[0]], e))
        frames.append((v, e))
    (mx, emx), (my, emy) = frames
    n = min(len(mx), len(my))
    return mx[:n], my[:n], emx[:n], emy[:n]


def _three_zone(relation: str, d: np.ndarray, thr: np.ndarray, err: np.ndarray,
                offset: int) -> OrderVerdict:
    examined = offset + len(d) - 1
    hard = d > thr + err
    idx = np.flatnonzero(hard)
    if len(idx) > 0:
        w = int(idx[0])
        return OrderVerdict(relation=relation, outcome="Fails", witness=offset + w,
                            certified_error=float(err[w]), horizon=examined)
    soft = np.flatnonzero(d > thr)
    if len(soft) > 0:
        w = int(soft[0])
        return OrderVerdict(relation=relation, outcome="Inconclusive", witness=None,
                            certified_error=float(err[w]), horizon=examined,
                            reason=f"violation at x={offset + w} within the numerical band")
    top = float(np.max(err)) if len(err) else 0.0
    return OrderVerdict(relation=relation, outcome="Holds", witness=None,
                        certified_error=top, horizon=examined)


def check_st(tX: TruncatedPmf, tY: TruncatedPmf, tol: float = 1e-12,
             max_x: Optional[int] = None) -> OrderVerdict:
    """Usual stochastic order: S_X(x) <= S_Y(x) everywhere."""
    sx, sy, esx, esy = aligned_survival(tX, tY)
    if max_x is not None:
        sx, sy, esx, esy = (a[: max_x + 1] for a in (sx, sy, esx, esy))
    d = sx - sy
    thr = tol * np.maximum(sx, sy)
    return _three_zone("st", d, thr, esx + esy, 0)


def check_hr(tX: TruncatedPmf, tY: TruncatedPmf, tol: float = 1e-12,
             max_x: Optional[int] = None) -> OrderVerdict:
    """Hazard rate order: S_X(x+1) S_Y(x) <= S_X(x) S_Y(x+1) everywhere,
    the cross-multiplied form of S_X/S_Y nonincreasing."""
    sx, sy, esx, esy = aligned_survival(tX, tY)
    if max_x is not None:
        k = max_x + 2
        sx, sy, esx, esy = (a[:k] for a in (sx, sy, esx, esy))
    p1 = sx[1:] * sy[:-1]
    p2 = sx[:-1] * sy[1:]
    d = p1 - p2
    thr = tol * np.maximum(p1, p2)
    err = esx[1:] * sy[:-1] + sx[1:] * esy[:-1] + esx[:-1] * sy[1:] + sx[:-1] * esy[1:]
    return _three_zone("hr", d, thr, err, 0)


def check_lr(tX: TruncatedPmf, tY: TruncatedPmf, tol: float = 1e-12,
             max_x: Optional[int] = None) -> OrderVerdict:
    """Likelihood ratio order: f_X(x+1) f_Y(x) <= f_X(x) f_Y(x+1) everywhere,
    the cross-multiplied form of f_X/f_Y nonincreasing under the a/0 = +inf
    convention (a > 0)."""
    fx, fy, efx, efy = aligned_pmf(tX, tY)
    if max_x is not None:
        k = max_x + 2
        fx, fy, efx, efy = (a[:k] for a in (fx, fy, efx, efy))
    p1 = fx[1:] * fy[:-1]
    p2 = fx[:-1] * fy[1:]
    d = p1 - p2
    thr = tol * np.maximum(p1, p2)
    err = efx[1:] * fy[:-1] + fx[1:] * efy[:-1] + efx[:-1] * fy[1:] + fx[:-1] * efy[1:]
    return _three_zone("lr", d, thr, err, 0)


def check_mrl(tX: TruncatedPmf, tY: TruncatedPmf, tol: float = 1e-12,
              max_x: Optional[int] = None) -> OrderVerdict:
    """Mean residual life order: m_X(x) <= m_Y(x) on the certified range,
    starting at natural x = -1 where m is the mean plus one."""
    mx, my, emx, emy = aligned_mrl(tX, tY)
    if max_x is not None:
        k = max_x + 2  # position of natural coordinate max_x
        mx, my, emx, emy = (a[:k] for a in (mx, my, emx, emy))
    d = mx - my
    thr = tol * np.maximum(1.0, np.maximum(np.abs(mx), np.abs(my)))
    return _three_zone("mrl", d, thr, emx + emy, -1)


_CHECKS = {"lr": check_lr, "hr": check_hr, "mrl": check_mrl, "st": check_st}


def truncate_pair(spec_x: FamilySpec, spec_y: FamilySpec, tail_tol: float = 1e-12,
                  max_terms: int = MAX_TERMS) -> Tuple[TruncatedPmf, TruncatedPmf]:
    """Truncate two specs onto a shared natural index range.

    The shorter inexact window is re-truncated out to the longer horizon.
    Without this, one relation can certify a failure from tail aggregates
    that another relation's shorter pmf window cannot see, and the
    implication chain would be asserted across mismatched windows.
    """
    tx = truncate(spec_x, tail_tol, max_terms)
    ty = truncate(spec_y, tail_tol, max_terms)
    hx = tx.horizon + tx.origin_shift
    hy = ty.horizon + ty.origin_shift
    if hx < hy and not tx.upper_is_exact:
        tx = truncate(spec_x, tail_tol, max_terms, min_horizon=hy - tx.origin_shift)
    elif hy < hx and not ty.upper_is_exact:
        ty = truncate(spec_y, tail_tol, max_terms, min_horizon=hx - ty.origin_shift)
    return tx, ty


def check_all(tX: TruncatedPmf, tY: TruncatedPmf, tol: float = 1e-12,
              max_x: Optional[int] = None) -> Dict[str, OrderVerdict]:
    """All four relation checks, with the implication chain enforced on
    certified outcomes: lr -> hr -> mrl and hr -> st.  A certified
    contradiction is an internal bug, never a property of the input."""
    out = {rel: _CHECKS[rel](tX, tY, tol=tol, max_x=max_x) for rel in RELATIONS}
    _assert_chain(out)
    return out


_IMPLICATIONS = (("lr", "hr"), ("lr", "mrl"), ("lr", "st"), ("hr", "mrl"), ("hr", "st"))


def _assert_chain(verdicts: Dict[str, OrderVerdict]) -> None:
    for upper, lower in _IMPLICATIONS:
        u, l = verdicts.get(upper), verdicts.get(lower)
        if u is None or l is None:
            continue
        if u.outcome == "Holds" and l.outcome == "Fails":
            raise ConsistencyError(
                f"implication chain broke: {upper} Holds but {lower} Fails "
                f"(witness x={l.witness}, certified error {l.certified_error:.3e})")
