"""Shape classification of nonnegative sequences.

The central objects are step signs computed with a relative tie tolerance:
a step from a to b counts as flat when |b - a| <= tie_tol * max(|a|, |b|).
A sequence is then constant, increasing, decreasing, unimodal (strictly:
at least one up step strictly before all down steps, both present), or
other (some down step is later followed by an up step).

For log-concave sequences the shape is already decided by the first ratio
and the terminal ratio, since successive ratios are nonincreasing; that
shortcut is exposed as classify_from_ratio_endpoints and is fed with
closed-form endpoint values by the criteria layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

VALUE_FLOOR = 1e-300


@dataclass(frozen=True)
class ShapeClass:
    label: str  # constant | increasing | decreasing | unimodal | other
    mode: Optional[int] = None
    plateau: Optional[Tuple[int, int]] = None
    witness: Optional[Tuple[int, int]] = None  # (down step, later up step)

    def __post_init__(self):
        if self.label not in ("constant", "increasing", "decreasing", "unimodal", "other"):
            raise ValueError(f"unknown shape label {self.label!r}")


def _step_signs(seq: np.ndarray, tie_tol: float) -> np.ndarray:
    a, b = seq[:-1], seq[1:]
    inf_a, inf_b = np.isinf(a), np.isinf(b)
    with np.errstate(invalid="ignore"):
        diff = b - a
        scale = np.maximum(np.abs(a), np.abs(b))
        tie = np.abs(diff) <= tie_tol * scale
        signs = np.where(tie, 0.0, np.sign(diff))
    signs[inf_a & inf_b] = 0.0
    signs[inf_b & ~inf_a] = 1.0
    signs[inf_a & ~inf_b] = -1.0
    return signs.astype(int)


def classify_sequence(seq, tie_tol: float = 1e-9) -> ShapeClass:
    """Classify a sequence of nonnegative (possibly +inf) values."""
    arr = np.asarray(seq, dtype=float)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("classify_sequence: need a non-empty 1-D sequence")
    if np.any(np.isnan(arr)):
        raise ValueError("classify_sequence: sequence contains undefined entries")
    if len(arr) == 1:
        return ShapeClass(label="constant", plateau=(0, 0))
    signs = _step_signs(arr, tie_tol)
    ups = np.flatnonzero(signs > 0)
    downs = np.flatnonzero(signs < 0)
    if len(ups) == 0 and len(downs) == 0:
        return ShapeClass(label="constant", plateau=(0, len(arr) - 1))
    if len(downs) == 0:
        return ShapeClass(label="increasing")
    if len(ups) == 0:
        return ShapeClass(label="decreasing")
    last_up, first_down = int(ups[-1]), int(downs[0])
    if last_up < first_down:
        return ShapeClass(label="unimodal", mode=last_up + 1,
                          plateau=(last_up + 1, first_down))
    later_ups = ups[ups > first_down]
    return ShapeClass(label="other", witness=(first_down, int(later_ups[0])))


def classify_robust(seq, tie_tol: float = 1e-9) -> Tuple[ShapeClass, bool]:
    """Classification plus a certification flag: the label must be stable
    under widening the tie tolerance tenfold."""
    fine = classify_sequence(seq, tie_tol)
    coarse = classify_sequence(seq, 10.0 * tie_tol)
    return fine, fine.label == coarse.label


def is_logconcave(seq, tol: float = 1e-12) -> Tuple[bool, Optional[int]]:
    """Whether a nonnegative sequence is log-concave, i.e. its positive part
    is a contiguous block on which a(j)^2 >= a(j-1) a(j+1) up to tol in log
    space.  Returns (ok, index of the first violation or None)."""
    arr = np.asarray(seq, dtype=float)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("is_logconcave: need a non-empty 1-D sequence")
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise ValueError("is_logconcave: entries must be finite and nonnegative")
    alive = np.flatnonzero(arr > VALUE_FLOOR)
    if len(alive) == 0:
        return True, None
    lo, hi = int(alive[0]), int(alive[-1])
    if len(alive) != hi - lo + 1:
        gap = lo + int(np.flatnonzero(arr[lo:hi + 1] <= VALUE_FLOOR)[0])
        return False, gap
    if hi - lo < 2:
        return True, None
    w = np.log(arr[lo:hi + 1])
    defect = 2.0 * w[1:-1] - w[:-2] - w[2:]
    bad = np.flatnonzero(defect < -tol)
    if len(bad) > 0:
        return False, lo + 1 + int(bad[0])
    return True, None


def classify_from_ratio_endpoints(first_ratio: float, terminal_ratio: float,
                                  band: float = 1e-9) -> Optional[ShapeClass]:
    """Shape of a log-concave sequence from its first and terminal
    successive ratios (the ratios themselves are nonincreasing).

    Returns None when either endpoint sits inside the guard band around 1,
    so a caller can refuse to certify a knife-edge case; the fully exact
    flat case (both ratios equal to 1) still classifies as constant.
    """
    if math.isnan(first_ratio) or math.isnan(terminal_ratio):
        return None
    if first_ratio == 1.0 and terminal_ratio == 1.0:
        return ShapeClass(label="constant")
    if math.isinf(terminal_ratio):
        return None  # ratios cannot be nonincreasing up to +inf
    near1 = lambda r: abs(r - 1.0) <= band
    if near1(first_ratio) or near1(terminal_ratio):
        return None
    if first_ratio < 1.0:
        return ShapeClass(label="decreasing")
    if terminal_ratio > 1.0:
        return ShapeClass(label="increasing")
    # first > 1 > terminal
    return ShapeClass(label="unimodal")


@dataclass(frozen=True)
class RatioCurve:
    """Pointwise ratio of two pmf blocks over their common alive range."""

    values: np.ndarray
    infinite_mask: np.ndarray
    numeric_containment: bool  # numerator alive implies denominator alive


def likelihood_ratio(fx, fy, floor: float = VALUE_FLOOR) -> RatioCurve:
    """l(x) = fx(x) / fy(x) with trailing dead entries trimmed.

    Points where only the denominator has died carry +inf; points where
    both died (possible only by underflow inside the examined window)
    carry nan and are rejected later by classify_sequence.
    """
    fx = np.asarray(fx, dtype=float)
    fy = np.asarray(fy, dtype=float)
    if fx.shape != fy.shape or fx.ndim != 1:
        raise ValueError("likelihood_ratio: need matching 1-D pmf blocks")
    alive = np.flatnonzero((fx > floor) | (fy > floor))
    if len(alive) == 0:
        raise ValueError("likelihood_ratio: both blocks are entirely below the floor")
    k = int(alive[-1]) + 1
    fx, fy = fx[:k], fy[:k]
    x_alive, y_alive = fx > floor, fy > floor
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = fx / fy
    inf_mask = x_alive & ~y_alive
    vals[inf_mask] = np.inf
    vals[~x_alive & ~y_alive] = np.nan
    return RatioCurve(values=vals, infinite_mask=inf_mask,
                      numeric_containment=not bool(np.any(inf_mask)))
