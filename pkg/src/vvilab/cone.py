"""Componentwise order of R^m against the nonnegative orthant cone.

Every comparison runs through a tolerance band: entries with ``|v_i| <= tol``
count as exactly zero.  Downstream checkers compare floating-point values, so
they need a stable "is this nonzero" decision; the band provides it.
Entries may be ``+inf`` or ``-inf`` (they compare as above/below any band);
NaN entries are rejected.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

DEFAULT_TOL = 1e-9


class ConeStatus(str, Enum):
    STRICTLY_NEGATIVE = "strictly_negative"
    NEGATIVE_DOMINATED = "negative_dominated"
    ZERO = "zero"
    POSITIVE_DOMINATED = "positive_dominated"
    STRICTLY_POSITIVE = "strictly_positive"
    INCOMPARABLE = "incomparable"


# membership sets used by the variational-inequality predicates
CONE_SETS = {
    "neg_cone_minus_zero": frozenset({ConeStatus.STRICTLY_NEGATIVE, ConeStatus.NEGATIVE_DOMINATED}),
    "pos_cone_minus_zero": frozenset({ConeStatus.STRICTLY_POSITIVE, ConeStatus.POSITIVE_DOMINATED}),
    "neg_interior": frozenset({ConeStatus.STRICTLY_NEGATIVE}),
    "pos_interior": frozenset({ConeStatus.STRICTLY_POSITIVE}),
}


def _as_vector(v) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if a.ndim != 1 or a.size < 1:
        raise ValueError("expected a 1-d vector with at least one entry")
    if np.isnan(a).any():
        raise ValueError("vector contains NaN")
    return a


def classify(v, tol: float = DEFAULT_TOL) -> ConeStatus:
    """Position of v relative to the nonnegative orthant, with a zero band."""
    if tol < 0:
        raise ValueError("tolerance must be >= 0")
    a = _as_vector(v)
    neg = a < -tol
    pos = a > tol
    if not neg.any() and not pos.any():
        return ConeStatus.ZERO
    if neg.all():
        return ConeStatus.STRICTLY_NEGATIVE
    if pos.all():
        return ConeStatus.STRICTLY_POSITIVE
    if not pos.any():
        return ConeStatus.NEGATIVE_DOMINATED
    if not neg.any():
        return ConeStatus.POSITIVE_DOMINATED
    return ConeStatus.INCOMPARABLE


def in_set(v, set_name: str, tol: float = DEFAULT_TOL) -> bool:
    """Membership in one of the four cone sets, consistent with classify()."""
    try:
        statuses = CONE_SETS[set_name]
    except KeyError:
        raise ValueError(f"unknown cone set {set_name!r}") from None
    return classify(v, tol) in statuses


def membership_slack(v, set_name: str, tol: float = DEFAULT_TOL) -> float:
    """Signed robustness of ``in_set(v, set_name, tol)``.

    Positive values mean the vector sits inside the set with that much room
    (in the infinity norm) before the classification can flip; negative
    values measure how far outside it is.  Diagnostic only: boolean
    decisions always go through ``in_set``.
    """
    a = _as_vector(v)
    hi = float(np.max(a))
    lo = float(np.min(a))
    if set_name == "neg_interior":
        return -hi - tol
    if set_name == "pos_interior":
        return lo - tol
    if set_name == "neg_cone_minus_zero":
        return min(tol - hi, -lo - tol)
    if set_name == "pos_cone_minus_zero":
        return min(hi - tol, lo + tol)
    raise ValueError(f"unknown cone set {set_name!r}")


def exclusion_slack(v, set_name: str, tol: float = DEFAULT_TOL) -> float:
    """Signed robustness of ``not in_set(v, set_name, tol)``."""
    return -membership_slack(v, set_name, tol)
