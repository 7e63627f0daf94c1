"""Sampled falsification checkers for geodesic convexity classes.

Each checker sweeps the sampler's points in a fixed order and returns the
first violation as a replayable witness, so verdicts are deterministic for
a fixed seed.  Strict inequalities are read as "beyond the tolerance band":
a value counts as positive only above ``tol`` and negative only below
``-tol``.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .bifunctions import Bifunction, ext_diff
from .cone import DEFAULT_TOL, ConeStatus, classify, exclusion_slack, in_set, membership_slack
from .dini import LimitSchedule, ObjectiveFn, dini_vector
from .manifolds import Point, geodesic_point, log_map
from .sampling import CheckOutcome, DomainSampler, Witness, fail_outcome, hold_outcome, select_pairs

T_LATTICE = (0.0, 0.25, 0.5, 0.75, 1.0)
QUASI_T_SET = (0.25, 0.5, 0.75)
RANDOM_TRIPLES_PER_PAIR = 8

HCONVEX_FORMS = ("componentwise", "cone")


def _ctx(tol: float, phi: Optional[ObjectiveFn] = None, h: Optional[Bifunction] = None, **extra) -> dict:
    ctx = {"tol": tol, "manifold": (phi or h).manifold.describe()}
    if phi is not None:
        ctx["objective"] = phi.id
    if h is not None:
        ctx["bifunction"] = h.id
    ctx.update(extra)
    return ctx


def convexity_gap(phi: ObjectiveFn, p: Point, q: Point, a: float, b: float, t: float) -> np.ndarray:
    """Phi(gamma(ta + (1-t)b)) - t Phi(gamma(a)) - (1-t) Phi(gamma(b))."""
    u = t * a + (1.0 - t) * b
    f = lambda s: phi.eval(geodesic_point(p, q, s))
    return f(u) - t * f(a) - (1.0 - t) * f(b)


def check_geodesic_convex(
    phi: ObjectiveFn,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """Convexity of the composition with every sampled geodesic.

    The convexity gap must stay in the closed negative cone: no component
    may exceed ``tol``.
    """
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=False, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        cache: dict = {}

        def composed(s: float) -> np.ndarray:
            if s not in cache:
                cache[s] = phi.eval(geodesic_point(p, q, s))
            return cache[s]

        triples = [(a, b, t) for a in T_LATTICE for b in T_LATTICE for t in T_LATTICE]
        rng = sampler.pair_rng(7, i, j)
        triples += [tuple(rng.uniform(0.0, 1.0, 3)) for _ in range(RANDOM_TRIPLES_PER_PAIR)]
        for a, b, t in triples:
            u = t * a + (1.0 - t) * b
            gap = composed(u) - t * composed(a) - (1.0 - t) * composed(b)
            checked += 1
            margin = float(np.max(gap))
            if margin > tol:
                w = Witness(
                    "geodesic-convex",
                    _ctx(tol, phi=phi),
                    {
                        "p": list(p.coords),
                        "q": list(q.coords),
                        "a": float(a),
                        "b": float(b),
                        "t": float(t),
                        "gap": [float(x) for x in gap],
                    },
                    margin,
                )
                return fail_outcome(checked, w)
    return hold_outcome(checked)


def quasiconvex_gap(phi: ObjectiveFn, p: Point, q: Point, t: float) -> np.ndarray:
    """Phi(w) - componentwise max of the endpoint values, w on the q->p geodesic."""
    w = geodesic_point(q, p, t)
    return phi.eval(w) - np.maximum(phi.eval(p), phi.eval(q))


def check_geodesic_quasiconvex(
    phi: ObjectiveFn,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """Interior geodesic values must not exceed the endpoint maxima."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=False, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        for t in QUASI_T_SET:
            gap = quasiconvex_gap(phi, p, q, t)
            checked += 1
            margin = float(np.max(gap))
            if margin > tol:
                w = Witness(
                    "geodesic-quasiconvex",
                    _ctx(tol, phi=phi),
                    {
                        "p": list(p.coords),
                        "q": list(q.coords),
                        "t": float(t),
                        "gap": [float(x) for x in gap],
                    },
                    margin,
                )
                return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_h_convex(
    phi: ObjectiveFn,
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    form: str = "componentwise",
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """h(p, log_p q) against the increment Phi(q) - Phi(p).

    ``form="componentwise"`` requires h <= increment in every component;
    ``form="cone"`` only forbids h - increment from landing in the positive
    cone minus zero.  The two readings are not equivalent for vector order,
    so the active form is recorded in the witness context.
    """
    if form not in HCONVEX_FORMS:
        raise ValueError(f"unknown h-convexity form {form!r}")
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        hval = h.eval(p, log_map(p, q))
        incr = phi.eval(q) - phi.eval(p)
        checked += 1
        if form == "componentwise":
            gap = ext_diff(hval, incr)
            margin = float(np.max(gap))
            violated = margin > tol
        else:
            x = ext_diff(hval, incr)
            violated = in_set(x, "pos_cone_minus_zero", tol)
            margin = membership_slack(x, "pos_cone_minus_zero", tol)
        if violated:
            w = Witness(
                "h-convex",
                _ctx(tol, phi=phi, h=h, form=form),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "h": [float(x) for x in hval],
                    "increment": [float(x) for x in incr],
                },
                margin,
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_h_pseudoconvex(
    phi: ObjectiveFn,
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """A strict componentwise decrease must force h strictly into -int."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        diff = phi.eval(q) - phi.eval(p)
        checked += 1
        if classify(diff, tol) is not ConeStatus.STRICTLY_NEGATIVE:
            continue
        hval = h.eval(p, log_map(p, q))
        if not in_set(hval, "neg_interior", tol):
            w = Witness(
                "h-pseudoconvex",
                _ctx(tol, phi=phi, h=h),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "difference": [float(x) for x in diff],
                    "h": [float(x) for x in hval],
                },
                exclusion_slack(hval, "neg_interior", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_h_quasiconvex(
    phi: ObjectiveFn,
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """A componentwise non-increase must keep h out of the positive cone minus zero."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        diff = phi.eval(q) - phi.eval(p)
        checked += 1
        if not in_set(diff, "neg_cone_minus_zero", tol):
            continue
        hval = h.eval(p, log_map(p, q))
        if in_set(hval, "pos_cone_minus_zero", tol):
            w = Witness(
                "h-quasiconvex",
                _ctx(tol, phi=phi, h=h),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "difference": [float(x) for x in diff],
                    "h": [float(x) for x in hval],
                },
                membership_slack(hval, "pos_cone_minus_zero", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_dini_envelope(
    phi: ObjectiveFn,
    h: Bifunction,
    sampler: DomainSampler,
    sched: LimitSchedule = LimitSchedule(),
    tol: float = DEFAULT_TOL,
    side: str = "upper",
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """Envelope conditions linking h to the Dini derivatives of the objective.

    ``side="upper"`` requires h(p, log_p q) <= upper Dini derivative of the
    objective, componentwise; ``side="lower"`` requires the lower Dini
    derivative <= h(p, log_p q).
    """
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        v = log_map(p, q)
        hval = h.eval(p, v)
        dini = dini_vector(phi, p, v, sched, mode=side)
        gap = ext_diff(hval, dini) if side == "upper" else ext_diff(dini, hval)
        checked += 1
        margin = float(np.max(gap))
        if margin > tol:
            w = Witness(
                "dini-envelope-" + side,
                _ctx(tol, phi=phi, h=h, side=side, sched=sched.describe()),
                {
                    "p": list(p.coords),
                    "q": list(q.coords),
                    "h": [float(x) for x in hval],
                    "dini": [float(x) for x in dini],
                },
                margin,
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)
