"""Re-evaluate a serialized witness and reproduce its verdict and margin.

A witness block records the catalog ids, manifold tag and sample tuple of a
violation.  Replaying it reruns exactly the arithmetic the checker ran on
that tuple, so verdict and margin come back bit-identical.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from . import catalog
from .bifunctions import ext_diff
from .cone import ConeStatus, classify, exclusion_slack, in_set, membership_slack
from .convexity import convexity_gap, quasiconvex_gap
from .dini import LimitSchedule, dini_vector
from .manifolds import Point, Tangent, exp_map, geodesic_point, log_map, manifold_from_dict, parallel_transport
from .sampling import COUNTEREXAMPLE, HOLDS


def _sched_from(ctx: dict, sched: Optional[LimitSchedule]) -> LimitSchedule:
    if "sched" in ctx:
        s = ctx["sched"]
        return LimitSchedule(s["t0"], s["ratio"], int(s["steps"]))
    return sched or LimitSchedule()


def _resolve(ctx: dict, sched: LimitSchedule):
    manifold = manifold_from_dict(ctx["manifold"])
    phi = None
    if ctx.get("objective"):
        phi = catalog.get_objective(ctx["objective"])
        if phi.manifold != manifold:
            phi = replace(phi, manifold=manifold)
    h = None
    if ctx.get("bifunction"):
        h_id = ctx["bifunction"]
        if h_id.startswith(catalog.ADAPTER_PREFIXES):
            _, obj_id = catalog.split_adapter_id(h_id)
            base = catalog.get_objective(obj_id)
            if base.manifold != manifold:
                base = replace(base, manifold=manifold)
            h = catalog.adapter_from_objective(h_id, base, sched)
        else:
            h = catalog.get_bifunction(h_id)
            if h.manifold != manifold:
                h = replace(h, manifold=manifold)
    return manifold, phi, h


def _point(manifold, coords) -> Point:
    return Point(manifold, tuple(coords))


def replay_witness(witness: dict, sched: Optional[LimitSchedule] = None) -> Tuple[str, float]:
    """Returns (verdict, margin) for the recorded tuple: 'counterexample' if
    the violation reproduces, 'holds_on_samples' otherwise."""
    check = witness["check"]
    ctx = witness["context"]
    data = witness["data"]
    tol = float(ctx["tol"])
    sched = _sched_from(ctx, sched)
    manifold, phi, h = _resolve(ctx, sched)

    if check == "geodesic-convex":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        gap = convexity_gap(phi, p, q, data["a"], data["b"], data["t"])
        margin = float(np.max(gap))
        return (COUNTEREXAMPLE if margin > tol else HOLDS), margin

    if check == "geodesic-quasiconvex":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        gap = quasiconvex_gap(phi, p, q, data["t"])
        margin = float(np.max(gap))
        return (COUNTEREXAMPLE if margin > tol else HOLDS), margin

    if check == "h-convex":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        hval = h.eval(p, log_map(p, q))
        incr = phi.eval(q) - phi.eval(p)
        if ctx["form"] == "componentwise":
            margin = float(np.max(ext_diff(hval, incr)))
            return (COUNTEREXAMPLE if margin > tol else HOLDS), margin
        x = ext_diff(hval, incr)
        violated = in_set(x, "pos_cone_minus_zero", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), membership_slack(x, "pos_cone_minus_zero", tol)

    if check == "h-pseudoconvex":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        diff = phi.eval(q) - phi.eval(p)
        fired = classify(diff, tol) is ConeStatus.STRICTLY_NEGATIVE
        hval = h.eval(p, log_map(p, q))
        violated = fired and not in_set(hval, "neg_interior", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), exclusion_slack(hval, "neg_interior", tol)

    if check == "h-quasiconvex":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        diff = phi.eval(q) - phi.eval(p)
        fired = in_set(diff, "neg_cone_minus_zero", tol)
        hval = h.eval(p, log_map(p, q))
        violated = fired and in_set(hval, "pos_cone_minus_zero", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), membership_slack(hval, "pos_cone_minus_zero", tol)

    if check in ("dini-envelope-upper", "dini-envelope-lower"):
        side = ctx["side"]
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        v = log_map(p, q)
        hval = h.eval(p, v)
        dini = dini_vector(phi, p, v, sched, mode=side)
        gap = ext_diff(hval, dini) if side == "upper" else ext_diff(dini, hval)
        margin = float(np.max(gap))
        return (COUNTEREXAMPLE if margin > tol else HOLDS), margin

    if check == "monotone":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        s = h.eval(p, log_map(p, q)) + h.eval(q, log_map(q, p))
        violated = in_set(s, "pos_cone_minus_zero", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), membership_slack(s, "pos_cone_minus_zero", tol)

    if check == "pseudomonotone":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        fwd = h.eval(p, log_map(p, q))
        fired = not in_set(fwd, "neg_cone_minus_zero", tol)
        back = h.eval(q, log_map(q, p))
        violated = fired and in_set(back, "pos_cone_minus_zero", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), membership_slack(back, "pos_cone_minus_zero", tol)

    if check == "strictly-pseudomonotone":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        fwd = h.eval(p, log_map(p, q))
        fired = not in_set(fwd, "neg_cone_minus_zero", tol)
        back = h.eval(q, log_map(q, p))
        violated = fired and not in_set(back, "neg_interior", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), float(np.max(back) + tol)

    if check == "upper-sign-continuous":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        back = log_map(q, p)
        antecedent = True
        for t in ctx["t_set"]:
            w_t = geodesic_point(p, q, t)
            if in_set(h.eval(w_t, parallel_transport(q, w_t, back)), "pos_cone_minus_zero", tol):
                antecedent = False
                break
        fwd = h.eval(p, log_map(p, q))
        violated = antecedent and in_set(fwd, "neg_cone_minus_zero", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), membership_slack(fwd, "neg_cone_minus_zero", tol)

    if check in ("positive-homogeneity", "reversal-homogeneity", "subadditive-poshom"):
        p = _point(manifold, data["p"])
        kind = data.get("kind", "homogeneity")
        if kind == "reversal":
            v = Tangent(p, tuple(data["v"]))
            margin = float(np.max(ext_diff(-h.eval(p, -v), h.eval(p, v))))
            return (COUNTEREXAMPLE if margin > tol else HOLDS), margin
        if kind == "subadditivity":
            u = Tangent(p, tuple(data["u"]))
            v = Tangent(p, tuple(data["v"]))
            margin = float(np.max(ext_diff(h.eval(p, u + v), h.eval(p, u) + h.eval(p, v))))
            return (COUNTEREXAMPLE if margin > tol else HOLDS), margin
        v = Tangent(p, tuple(data["v"]))
        a = float(data["alpha"])
        margin = float(np.max(np.abs(ext_diff(h.eval(p, v.scaled(a)), a * h.eval(p, v)))))
        return (COUNTEREXAMPLE if margin > tol * (1.0 + abs(a)) else HOLDS), margin

    if check == "increment-domination":
        p, q = _point(manifold, data["p"]), _point(manifold, data["q"])
        gap = ext_diff(h.eval(p, log_map(p, q)), phi.eval(q) - phi.eval(p))
        violated = not in_set(gap, "pos_interior", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), exclusion_slack(gap, "pos_interior", tol)

    if check == "w-set-convex":
        p = _point(manifold, data["p"])
        q1 = _point(manifold, data["q1"])
        q2 = _point(manifold, data["q2"])
        t = float(data["t"])
        combo = log_map(p, q1).scaled(1.0 - t) + log_map(p, q2).scaled(t)
        x = exp_map(p, combo)
        val = h.eval(p, log_map(p, x))
        violated = not in_set(val, "neg_interior", tol)
        return (COUNTEREXAMPLE if violated else HOLDS), exclusion_slack(val, "neg_interior", tol)

    raise ValueError(f"cannot replay unknown check {check!r}")


def extract_witness(payload: dict) -> dict:
    """Pull the witness block out of a report (or accept a bare witness)."""
    if {"check", "context", "data"} <= set(payload.keys()):
        return payload
    result = payload.get("result", {})
    if result.get("witness"):
        return result["witness"]
    for hyp in result.get("hypotheses", []):
        if hyp.get("witness"):
            return hyp["witness"]
    raise ValueError("no witness block found in the given file")
