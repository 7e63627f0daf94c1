"""Vector valued bifunctions h(p, v) and their monotonicity-type checkers.

A bifunction stands in for a directional derivative: it eats a point and a
tangent at that point and returns a vector of extended reals.  The checkers
below test the sign-transfer conditions (monotone, pseudomonotone, strictly
pseudomonotone), geodesic upper sign continuity, subadditivity and positive
homogeneity in the second argument, all by sampled falsification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .cone import DEFAULT_TOL, in_set, membership_slack
from .manifolds import Manifold, Point, Tangent, geodesic_point, log_map, parallel_transport
from .sampling import (
    CheckOutcome,
    DomainSampler,
    Witness,
    fail_outcome,
    hold_outcome,
    sample_tangents,
    select_pairs,
)

DEFAULT_T_SET = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_ALPHAS = (0.5, 2.0)


@dataclass(frozen=True)
class Bifunction:
    """A catalog-registered map (Point, Tangent at it) -> (R*)^m.

    ``resolution`` is the numerical accuracy of the values this bifunction
    returns (0 for closed forms).  Checks that compare h-values against
    each other, like homogeneity, cannot resolve below it.
    """

    id: str
    manifold: Manifold
    m: int
    fn: Callable[[Point, Tangent], np.ndarray]
    provenance: str = "derived"
    # (property tag, provenance of that tag) pairs
    properties: Tuple[Tuple[str, str], ...] = field(default=())
    resolution: float = 0.0

    def eval(self, p: Point, v: Tangent) -> np.ndarray:
        if v.base != p:
            raise ValueError("tangent is not anchored at the given point")
        if p.manifold != self.manifold:
            raise ValueError(f"bifunction {self.id!r} is registered on a different manifold")
        out = np.atleast_1d(np.asarray(self.fn(p, v), dtype=float))
        if out.shape != (self.m,):
            raise ValueError(f"bifunction {self.id!r} returned shape {out.shape}, expected ({self.m},)")
        if np.isnan(out).any():
            raise ValueError(f"bifunction {self.id!r} returned NaN")
        return out


def ext_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a - b over extended reals; matching infinities count as a zero gap."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        out = a - b
    both = np.isinf(a) & np.isinf(b) & (np.sign(a) == np.sign(b))
    out = np.where(both, 0.0, out)
    if np.isnan(out).any():
        raise ValueError("indeterminate extended-real comparison")
    return out


def _ctx(h: Bifunction, tol: float, **extra) -> dict:
    ctx = {"bifunction": h.id, "manifold": h.manifold.describe(), "tol": tol}
    ctx.update(extra)
    return ctx


def check_monotone(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """h(p, log_p q) + h(q, log_q p) must avoid the positive cone minus zero."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=False, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        s = h.eval(p, log_map(p, q)) + h.eval(q, log_map(q, p))
        checked += 1
        if in_set(s, "pos_cone_minus_zero", tol):
            w = Witness(
                "monotone",
                _ctx(h, tol),
                {"p": list(p.coords), "q": list(q.coords), "sum": [float(x) for x in s]},
                membership_slack(s, "pos_cone_minus_zero", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_pseudomonotone(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """Forward value outside -cone\\{0} must force the swapped value outside +cone\\{0}."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        fwd = h.eval(p, log_map(p, q))
        checked += 1
        if in_set(fwd, "neg_cone_minus_zero", tol):
            continue
        back = h.eval(q, log_map(q, p))
        if in_set(back, "pos_cone_minus_zero", tol):
            w = Witness(
                "pseudomonotone",
                _ctx(h, tol),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "forward": [float(x) for x in fwd],
                    "backward": [float(x) for x in back],
                },
                membership_slack(back, "pos_cone_minus_zero", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_strictly_pseudomonotone(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """As pseudomonotone, but the swapped value must land strictly inside -int."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        fwd = h.eval(p, log_map(p, q))
        checked += 1
        if in_set(fwd, "neg_cone_minus_zero", tol):
            continue
        back = h.eval(q, log_map(q, p))
        if not in_set(back, "neg_interior", tol):
            w = Witness(
                "strictly-pseudomonotone",
                _ctx(h, tol),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "forward": [float(x) for x in fwd],
                    "backward": [float(x) for x in back],
                },
                float(np.max(back) + tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_upper_sign_continuous(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    t_set: Sequence[float] = DEFAULT_T_SET,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """Sign condition along interior geodesic points forcing the endpoint one.

    Antecedent (taken over every t in ``t_set``): at w_t on the geodesic from
    p to q, h(w_t, transport of log_q p) stays outside the positive cone
    minus zero.  Consequent: h(p, log_p q) stays outside the negative cone
    minus zero.
    """
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        back = log_map(q, p)
        antecedent = True
        for t in t_set:
            w_t = geodesic_point(p, q, t)
            val = h.eval(w_t, parallel_transport(q, w_t, back))
            if in_set(val, "pos_cone_minus_zero", tol):
                antecedent = False
                break
        checked += 1
        if not antecedent:
            continue
        fwd = h.eval(p, log_map(p, q))
        if in_set(fwd, "neg_cone_minus_zero", tol):
            w = Witness(
                "upper-sign-continuous",
                _ctx(h, tol, t_set=list(t_set)),
                {"p": list(p.coords), "q": list(q.coords), "endpoint": [float(x) for x in fwd]},
                membership_slack(fwd, "neg_cone_minus_zero", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def _value_tol(h: Bifunction, tol: float) -> float:
    # comparisons between two h-values cannot resolve below h's own accuracy
    return max(tol, h.resolution)


def check_positive_homogeneity(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
) -> CheckOutcome:
    """h(p, a v) = a h(p, v) for a > 0, within tol * (1 + a)."""
    tol = _value_tol(h, tol)
    pts = sampler.points()
    checked = 0
    for i, v in sample_tangents(sampler, pts):
        p = pts[i]
        base = h.eval(p, v)
        for a in alphas:
            dev = float(np.max(np.abs(ext_diff(h.eval(p, v.scaled(a)), a * base))))
            checked += 1
            if dev > tol * (1.0 + abs(a)):
                w = Witness(
                    "positive-homogeneity",
                    _ctx(h, tol, alphas=list(alphas)),
                    {
                        "p": list(p.coords),
                        "v": list(v.components),
                        "alpha": a,
                        "deviation": dev,
                    },
                    dev,
                )
                return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_reversal_homogeneity(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
) -> CheckOutcome:
    """h(p, v) >= -h(p, -v) componentwise, plus positive homogeneity."""
    tol = _value_tol(h, tol)
    pts = sampler.points()
    checked = 0
    for i, v in sample_tangents(sampler, pts):
        p = pts[i]
        fwd = h.eval(p, v)
        rev = h.eval(p, -v)
        gap = float(np.max(ext_diff(-rev, fwd)))
        checked += 1
        if gap > tol:
            w = Witness(
                "reversal-homogeneity",
                _ctx(h, tol, alphas=list(alphas)),
                {
                    "p": list(p.coords),
                    "v": list(v.components),
                    "kind": "reversal",
                    "forward": [float(x) for x in fwd],
                    "reversed": [float(x) for x in rev],
                },
                gap,
            )
            return fail_outcome(checked, w)
    hom = check_positive_homogeneity(h, sampler, tol, alphas)
    checked += hom.samples_checked
    if not hom.holds:
        hom.witness.check = "reversal-homogeneity"
        hom.witness.data["kind"] = "homogeneity"
        return fail_outcome(checked, hom.witness)
    return hold_outcome(checked)


def check_subadditive_poshom(
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
) -> CheckOutcome:
    """h(p, u + v) <= h(p, u) + h(p, v) componentwise, plus positive homogeneity."""
    tol = _value_tol(h, tol)
    pts = sampler.points()
    tangents = sample_tangents(sampler, pts)
    by_point: dict = {}
    for i, v in tangents:
        by_point.setdefault(i, []).append(v)
    checked = 0
    for i, vs in sorted(by_point.items()):
        p = pts[i]
        for k in range(len(vs) - 1):
            u, v = vs[k], vs[k + 1]
            gap = float(np.max(ext_diff(h.eval(p, u + v), h.eval(p, u) + h.eval(p, v))))
            checked += 1
            if gap > tol:
                w = Witness(
                    "subadditive-poshom",
                    _ctx(h, tol, alphas=list(alphas)),
                    {
                        "p": list(p.coords),
                        "u": list(u.components),
                        "v": list(v.components),
                        "kind": "subadditivity",
                        "gap": gap,
                    },
                    gap,
                )
                return fail_outcome(checked, w)
    hom = check_positive_homogeneity(h, sampler, tol, alphas)
    checked += hom.samples_checked
    if not hom.holds:
        hom.witness.check = "subadditive-poshom"
        hom.witness.data["kind"] = "homogeneity"
        return fail_outcome(checked, hom.witness)
    return hold_outcome(checked)
