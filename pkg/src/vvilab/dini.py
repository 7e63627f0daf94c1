"""Dini upper/lower directional derivative estimates along geodesics.

The one-sided limit is discretized on a geometric schedule
``t_k = t0 * ratio^k``.  The upper (lower) estimate is the max (min) of the
difference quotients over the tail half of the schedule, which keeps the
estimate robust against pre-asymptotic quotients while staying above
rounding noise.  Quotients that diverge monotonically beyond
``DIVERGENCE_LIMIT`` are reported as +/-inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .manifolds import Manifold, Point, RangeError, Tangent, exp_map

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class LimitSchedule:
    """Geometric step schedule discretizing the t -> 0+ limit."""

    t0: float = 1e-2
    ratio: float = 0.5
    steps: int = 20

    def __post_init__(self):
        if self.t0 <= 0:
            raise ValueError("t0 must be > 0")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    def times(self) -> List[float]:
        return [self.t0 * self.ratio**k for k in range(self.steps)]

    def describe(self) -> dict:
        return {"t0": self.t0, "ratio": self.ratio, "steps": self.steps}


@dataclass(frozen=True)
class ObjectiveFn:
    """A catalog-registered vector valued objective on one manifold.

    ``fn`` maps a Point to an array of length ``m``.  When the objective is
    smooth, ``analytic_directional`` gives the exact derivative of
    ``t -> fn(exp_p(t v))`` at ``t = 0+`` and is used to cross-check the
    estimator.
    """

    id: str
    manifold: Manifold
    m: int
    fn: Callable[[Point], np.ndarray]
    analytic_directional: Optional[Callable[[Point, Tangent], np.ndarray]] = None
    provenance: str = "derived"
    # (property tag, provenance of that tag) pairs
    properties: Tuple[Tuple[str, str], ...] = field(default=())

    def eval(self, p: Point) -> np.ndarray:
        if p.manifold != self.manifold:
            raise ValueError(f"objective {self.id!r} is registered on a different manifold")
        out = np.atleast_1d(np.asarray(self.fn(p), dtype=float))
        if out.shape != (self.m,):
            raise ValueError(f"objective {self.id!r} returned shape {out.shape}, expected ({self.m},)")
        return out


def _quotients(
    fn: Callable[[Point], np.ndarray],
    p: Point,
    v: Tangent,
    sched: LimitSchedule,
    feasible: Optional[Callable[[Point], bool]] = None,
) -> List[Tuple[float, np.ndarray]]:
    base = np.atleast_1d(np.asarray(fn(p), dtype=float))
    out: List[Tuple[float, np.ndarray]] = []
    for t in sched.times():
        try:
            x = exp_map(p, v.scaled(t))
        except RangeError:
            continue
        if feasible is not None and not feasible(x):
            continue
        val = np.atleast_1d(np.asarray(fn(x), dtype=float))
        out.append((t, (val - base) / t))
    if not out:
        raise ValueError("all schedule steps left the feasible set")
    return out


def _tail_estimate(quotients: List[Tuple[float, np.ndarray]], steps: int, mode: str) -> np.ndarray:
    tail_len = min(math.ceil(steps / 2), len(quotients))
    tail = np.stack([q for _, q in quotients[-tail_len:]])
    if np.isnan(tail).any():
        raise ValueError("difference quotients produced NaN")
    est = tail.max(axis=0) if mode == "upper" else tail.min(axis=0)
    # monotone blow-up past the limit counts as a genuinely infinite derivative
    for i in range(tail.shape[1]):
        col = tail[:, i]
        mags = np.abs(col)
        if mags[-1] > DIVERGENCE_LIMIT and np.all(np.diff(mags) > 0):
            est[i] = math.inf if col[-1] > 0 else -math.inf
    return est


def dini_vector(
    phi: ObjectiveFn,
    p: Point,
    v: Tangent,
    sched: LimitSchedule = LimitSchedule(),
    mode: str = "upper",
    feasible: Optional[Callable[[Point], bool]] = None,
) -> np.ndarray:
    """Componentwise Dini derivative estimate of a vector objective."""
    if mode not in ("upper", "lower"):
        raise ValueError("mode must be 'upper' or 'lower'")
    if all(c == 0.0 for c in v.components):
        return np.zeros(phi.m)
    qs = _quotients(phi.eval, p, v, sched, feasible)
    return _tail_estimate(qs, sched.steps, mode)


def dini_upper(
    f: Callable[[Point], float],
    p: Point,
    v: Tangent,
    sched: LimitSchedule = LimitSchedule(),
    feasible: Optional[Callable[[Point], bool]] = None,
) -> float:
    """Upper Dini derivative estimate of a scalar function at p along v."""
    if all(c == 0.0 for c in v.components):
        return 0.0
    qs = _quotients(lambda x: np.array([f(x)]), p, v, sched, feasible)
    return float(_tail_estimate(qs, sched.steps, "upper")[0])


def dini_lower(
    f: Callable[[Point], float],
    p: Point,
    v: Tangent,
    sched: LimitSchedule = LimitSchedule(),
    feasible: Optional[Callable[[Point], bool]] = None,
) -> float:
    """Lower Dini derivative estimate of a scalar function at p along v."""
    if all(c == 0.0 for c in v.components):
        return 0.0
    qs = _quotients(lambda x: np.array([f(x)]), p, v, sched, feasible)
    return float(_tail_estimate(qs, sched.steps, "lower")[0])
