"""Model manifolds with exponential/log maps, parallel transport and distance.

Three catalog spaces are provided:

* ``Euclidean(n)`` -- flat R^n, all maps are affine.
* ``PositiveOrthant(n)`` -- the open positive orthant with the metric
  ``g_p(u, v) = sum_i u_i v_i / p_i^2``.  Geodesics are componentwise
  exponential curves ``t -> p_i * exp(v_i t / p_i)``.
* ``HyperbolaCurve`` -- the curve ``y = sqrt(1 + x^2)`` embedded in R^2,
  charted by its x coordinate, with the induced arc-length metric.

The hyperbola supports two geodesic parameterizations.  In
``GeodesicMode.PAPER`` (the default) geodesics are affine in the chart
coordinate, so the segment from chart 0 to chart 1 is
``t -> (t, sqrt(1 + t^2))``.  ``GeodesicMode.CONSTANT_SPEED`` uses the
arc-length-affine parameterization of the induced metric; this is the mode
in which the transport/splitting identities of the curve hold exactly.
Parallel transport and distance are parameterization independent: transport
follows the unit parallel frame (isometric) and distance is arc length.

All types are immutable values and all operations are pure functions, so
everything here is safe to evaluate concurrently.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy.optimize import brentq

# |v_i / p_i| above this would overflow exp() in IEEE double arithmetic.
MAX_LOG_RATIO = 700.0


class RangeError(ValueError):
    """An operation left the numerically representable range."""


class GeodesicMode(str, Enum):
    PAPER = "paper"
    CONSTANT_SPEED = "constant-speed"


@dataclass(frozen=True)
class Euclidean:
    n: int

    kind = "euclidean"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    def check_coords(self, x: np.ndarray) -> None:
        if x.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates, got {x.shape}")
        if not np.isfinite(x).all():
            raise ValueError("coordinates must be finite")

    def exp(self, x, v):
        return x + v

    def log(self, x, y):
        return y - x

    def transport(self, x, y, u):
        return np.array(u, copy=True)

    def inner(self, x, u, v):
        return float(np.dot(u, v))

    def distance(self, x, y):
        return float(np.linalg.norm(y - x))

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class PositiveOrthant:
    n: int

    kind = "positive_orthant"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    def check_coords(self, x: np.ndarray) -> None:
        if x.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates, got {x.shape}")
        if not np.isfinite(x).all():
            raise ValueError("coordinates must be finite")
        if not (x > 0).all():
            raise ValueError("positive orthant coordinates must be > 0")

    def exp(self, x, v):
        r = v / x
        if np.any(np.abs(r) > MAX_LOG_RATIO):
            raise RangeError("exp map overflow: |v/p| exceeds representable range")
        return x * np.exp(r)

    def log(self, x, y):
        return x * np.log(y / x)

    def transport(self, x, y, u):
        return u * (y / x)

    def inner(self, x, u, v):
        return float(np.sum(u * v / (x * x)))

    def distance(self, x, y):
        return float(np.linalg.norm(np.log(y / x)))

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n}


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _curve_speed(x: float) -> float:
    # ds/dx for the embedding u -> (u, sqrt(1 + u^2))
    return math.sqrt(1.0 + x * x / (1.0 + x * x))


@functools.lru_cache(maxsize=65536)
def _arclength(x: float) -> float:
    # signed arc length from chart 0 to chart x, 64-point Gauss-Legendre
    if x == 0.0:
        return 0.0
    half = 0.5 * x
    u = half * (_GL_NODES + 1.0)
    speeds = np.sqrt(1.0 + u * u / (1.0 + u * u))
    return float(half * np.dot(_GL_WEIGHTS, speeds))


def _chart_from_arclength(s: float) -> float:
    if s == 0.0:
        return 0.0
    # 1 <= ds/dx <= sqrt(2), so the chart point lies between s/sqrt(2) and s
    lo, hi = sorted((s / math.sqrt(2.0), s))
    lo -= 1e-9
    hi += 1e-9
    return brentq(lambda x: _arclength(x) - s, lo, hi, xtol=1e-13, rtol=8.9e-16)


@dataclass(frozen=True)
class HyperbolaCurve:
    mode: GeodesicMode = GeodesicMode.PAPER

    kind = "hyperbola_curve"
    n = 1

    def check_coords(self, x: np.ndarray) -> None:
        if x.shape != (1,):
            raise ValueError(f"expected 1 chart coordinate, got {x.shape}")
        if not np.isfinite(x).all():
            raise ValueError("coordinates must be finite")

    def embed(self, x: np.ndarray) -> np.ndarray:
        """Chart coordinate -> point (x, sqrt(1+x^2)) on the curve."""
        return np.array([x[0], math.sqrt(1.0 + x[0] * x[0])])

    def exp(self, x, v):
        if self.mode is GeodesicMode.PAPER:
            return x + v
        if v[0] == 0.0:
            return np.array(x, copy=True)
        s = _arclength(float(x[0])) + _curve_speed(float(x[0])) * float(v[0])
        return np.array([_chart_from_arclength(s)])

    def log(self, x, y):
        if self.mode is GeodesicMode.PAPER:
            return y - x
        ds = _arclength(float(y[0])) - _arclength(float(x[0]))
        return np.array([ds / _curve_speed(float(x[0]))])

    def transport(self, x, y, u):
        # unit parallel frame: preserves the metric norm in both modes
        return u * (_curve_speed(float(x[0])) / _curve_speed(float(y[0])))

    def inner(self, x, u, v):
        c = _curve_speed(float(x[0]))
        return float(c * c * u[0] * v[0])

    def distance(self, x, y):
        return abs(_arclength(float(y[0])) - _arclength(float(x[0])))

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n, "mode": self.mode.value}


Manifold = Union[Euclidean, PositiveOrthant, HyperbolaCurve]


def manifold_from_dict(d: dict) -> Manifold:
    kind = d["kind"]
    if kind == "euclidean":
        return Euclidean(int(d["n"]))
    if kind == "positive_orthant":
        return PositiveOrthant(int(d["n"]))
    if kind == "hyperbola_curve":
        return HyperbolaCurve(GeodesicMode(d.get("mode", "paper")))
    raise ValueError(f"unknown manifold kind {kind!r}")


@dataclass(frozen=True)
class Point:
    """A manifold point, stored as chart coordinates."""

    manifold: Manifold
    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        self.manifold.check_coords(np.asarray(coords))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords)


@dataclass(frozen=True)
class Tangent:
    """A tangent vector anchored at ``base``, in chart components."""

    base: Point
    components: Tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != len(self.base.coords):
            raise ValueError("tangent dimension does not match base point")
        if not all(math.isfinite(c) for c in comps):
            raise ValueError("tangent components must be finite")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.components)

    def scaled(self, t: float) -> "Tangent":
        return Tangent(self.base, tuple(t * c for c in self.components))

    def __neg__(self) -> "Tangent":
        return self.scaled(-1.0)

    def __add__(self, other: "Tangent") -> "Tangent":
        if other.base != self.base:
            raise ValueError("cannot add tangents at different base points")
        return Tangent(self.base, tuple(a + b for a, b in zip(self.components, other.components)))


def _require_same_manifold(p: Point, q: Point) -> None:
    if p.manifold != q.manifold:
        raise ValueError("points live on different manifolds")


def _require_base(p: Point, v: Tangent) -> None:
    if v.base != p:
        raise ValueError("tangent is not anchored at the given point")


def exp_map(p: Point, v: Tangent) -> Point:
    """Point reached at time 1 along the geodesic leaving p with velocity v."""
    _require_base(p, v)
    out = p.manifold.exp(p.array, v.array)
    if not np.isfinite(out).all():
        raise RangeError("exp map produced a non-finite point")
    return Point(p.manifold, tuple(out))


def log_map(p: Point, q: Point) -> Tangent:
    """Inverse of ``exp_map``: the velocity at p of the geodesic reaching q."""
    _require_same_manifold(p, q)
    return Tangent(p, tuple(p.manifold.log(p.array, q.array)))


def parallel_transport(p: Point, q: Point, v: Tangent) -> Tangent:
    """Carry v from T_p to T_q along the unique geodesic from p to q."""
    _require_same_manifold(p, q)
    _require_base(p, v)
    return Tangent(q, tuple(p.manifold.transport(p.array, q.array, v.array)))


def geodesic_point(p: Point, q: Point, t: float) -> Point:
    """The point at parameter t in [0, 1] on the geodesic from p to q."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("geodesic parameter must lie in [0, 1]")
    _require_same_manifold(p, q)
    return exp_map(p, log_map(p, q).scaled(t))


def inner(p: Point, u: Tangent, v: Tangent) -> float:
    """Riemannian scalar product of two tangents at p."""
    _require_base(p, u)
    _require_base(p, v)
    return p.manifold.inner(p.array, u.array, v.array)


def norm(p: Point, v: Tangent) -> float:
    return math.sqrt(max(inner(p, v, v), 0.0))


def distance(p: Point, q: Point) -> float:
    """Geodesic distance; symmetric, zero only for coincident points."""
    _require_same_manifold(p, q)
    return p.manifold.distance(p.array, q.array)
