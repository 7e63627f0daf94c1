"""Built-in catalog of objectives, bifunctions and problem instances.

Ids are stable interface tokens: reports and the CLI refer to them.  Each
entry carries a provenance tag ("paper", "derived" or "trivial") saying
whether its defining data was taken as stated or established by an oracle
sweep, and property tags carry their own provenance the same way.

Bifunction ids of the form ``dini:<objective>`` (and the shifted variants
``dini+1:`` / ``dini-1:``, and ``dini-lower:``) are resolved on demand as
directional-derivative adapters of catalog objectives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .bifunctions import Bifunction
from .dini import LimitSchedule, ObjectiveFn, dini_vector
from .manifolds import (
    Euclidean,
    GeodesicMode,
    HyperbolaCurve,
    Manifold,
    Point,
    PositiveOrthant,
    Tangent,
)
from .sampling import DomainSampler

ORTHANT1 = PositiveOrthant(1)
EUCLID1 = Euclidean(1)
HYPERBOLA = HyperbolaCurve(GeodesicMode.PAPER)


def _objective(id, manifold, m, fn, ad=None, provenance="derived", properties=()):
    return ObjectiveFn(id, manifold, m, fn, ad, provenance, tuple(properties))


def _x(p: Point) -> float:
    return p.coords[0]


def _v(t: Tangent) -> float:
    return t.components[0]


# -- objectives ---------------------------------------------------------------

OBJECTIVES: Dict[str, ObjectiveFn] = {}


def _register_objective(obj: ObjectiveFn) -> None:
    if obj.id in OBJECTIVES:
        raise ValueError(f"duplicate objective id {obj.id!r}")
    OBJECTIVES[obj.id] = obj


_register_objective(_objective(
    "example-3.3", HYPERBOLA, 2,
    lambda p: np.array([_x(p) ** 2, 1.0 + _x(p) ** 2]),
    ad=lambda p, t: np.array([2.0 * _x(p) * _v(t), 2.0 * _x(p) * _v(t)]),
    provenance="paper",
    properties=(("geodesic_convex", "paper"), ("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "neg-square-hyperbola", HYPERBOLA, 2,
    lambda p: np.array([-_x(p) ** 2, math.sqrt(1.0 + _x(p) ** 2)]),
    ad=lambda p, t: np.array([
        -2.0 * _x(p) * _v(t),
        _x(p) * _v(t) / math.sqrt(1.0 + _x(p) ** 2),
    ]),
    properties=(("not_geodesic_convex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "biobjective-quadratic", ORTHANT1, 2,
    lambda p: np.array([(_x(p) - 2.0) ** 2, (_x(p) - 3.0) ** 2]),
    ad=lambda p, t: np.array([2.0 * (_x(p) - 2.0) * _v(t), 2.0 * (_x(p) - 3.0) * _v(t)]),
    properties=(("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "centered-square", ORTHANT1, 2,
    lambda p: np.array([(_x(p) - 2.0) ** 2, (_x(p) - 2.0) ** 2]),
    ad=lambda p, t: np.array([2.0 * (_x(p) - 2.0) * _v(t), 2.0 * (_x(p) - 2.0) * _v(t)]),
    properties=(("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "log-square", ORTHANT1, 2,
    lambda p: np.array([math.log(_x(p)) ** 2, math.log(_x(p)) ** 2]),
    ad=lambda p, t: np.array([
        2.0 * math.log(_x(p)) * _v(t) / _x(p),
        2.0 * math.log(_x(p)) * _v(t) / _x(p),
    ]),
    properties=(("geodesic_convex", "derived"), ("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "scaled-identity", ORTHANT1, 2,
    lambda p: np.array([_x(p), 2.0 * _x(p)]),
    ad=lambda p, t: np.array([_v(t), 2.0 * _v(t)]),
    properties=(("geodesic_convex", "derived"), ("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "exp-pair", ORTHANT1, 2,
    lambda p: np.array([_x(p), 1.0 / _x(p)]),
    ad=lambda p, t: np.array([_v(t), -_v(t) / _x(p) ** 2]),
    properties=(("geodesic_convex", "derived"), ("geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "bimodal-qc", ORTHANT1, 2,
    lambda p: np.array([
        -((_x(p) - 1.0) ** 2) * (_x(p) - 3.0) ** 2,
        -((_x(p) - 1.0) ** 2) * (_x(p) - 3.0) ** 2,
    ]),
    properties=(("not_geodesic_quasiconvex", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "linear-pair", EUCLID1, 2,
    lambda p: np.array([_x(p), 2.0 * _x(p)]),
    ad=lambda p, t: np.array([_v(t), 2.0 * _v(t)]),
    provenance="trivial",
    properties=(("geodesic_convex", "trivial"), ("geodesic_quasiconvex", "trivial"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "abs-pair", EUCLID1, 2,
    lambda p: np.array([abs(_x(p) - 1.0), abs(_x(p) - 2.0)]),
    properties=(("geodesic_convex", "derived"), ("geodesic_quasiconvex", "derived"), ("nonsmooth", "trivial")),
))

_register_objective(_objective(
    "decreasing-pair", EUCLID1, 2,
    lambda p: np.array([-_x(p), -_x(p)]),
    ad=lambda p, t: np.array([-_v(t), -_v(t)]),
    provenance="trivial",
    properties=(("geodesic_convex", "trivial"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "concave-square", EUCLID1, 2,
    lambda p: np.array([-_x(p) ** 2, -_x(p) ** 2]),
    ad=lambda p, t: np.array([-2.0 * _x(p) * _v(t), -2.0 * _x(p) * _v(t)]),
    properties=(("not_h_quasiconvex_with_dini", "derived"), ("smooth", "trivial")),
))

_register_objective(_objective(
    "constant-pair", EUCLID1, 2,
    lambda p: np.array([1.0, 1.0]),
    ad=lambda p, t: np.array([0.0, 0.0]),
    provenance="trivial",
    properties=(("geodesic_convex", "trivial"), ("geodesic_quasiconvex", "trivial"),),
))


# -- bifunctions --------------------------------------------------------------

BIFUNCTIONS: Dict[str, Bifunction] = {}


def _register_bifunction(h: Bifunction) -> None:
    if h.id in BIFUNCTIONS:
        raise ValueError(f"duplicate bifunction id {h.id!r}")
    BIFUNCTIONS[h.id] = h


_register_bifunction(Bifunction(
    "paper-monotone", ORTHANT1, 2,
    lambda p, t: np.array([-_x(p), (math.log(_x(p)) - 1.0) / _x(p) * _v(t)]),
    provenance="paper",
    properties=(
        ("monotone", "paper"),
        ("pseudomonotone", "derived"),
        ("strictly_pseudomonotone", "derived"),
        ("not_pos_homogeneous", "derived"),
        ("not_upper_sign_continuous", "derived"),
    ),
))

_register_bifunction(Bifunction(
    "linear-ez", EUCLID1, 2,
    lambda p, t: np.array([_v(t), _v(t)]),
    provenance="trivial",
    properties=(
        ("monotone", "derived"),
        ("pseudomonotone", "derived"),
        ("strictly_pseudomonotone", "derived"),
        ("upper_sign_continuous", "derived"),
        ("pos_homogeneous", "trivial"),
        ("subadditive", "trivial"),
    ),
))

_register_bifunction(Bifunction(
    "half-line-linear", EUCLID1, 2,
    lambda p, t: np.array([_v(t), 2.0 * _v(t)]),
    provenance="trivial",
    properties=(("pos_homogeneous", "trivial"), ("subadditive", "trivial")),
))

_register_bifunction(Bifunction(
    "zero", EUCLID1, 2,
    lambda p, t: np.array([0.0, 0.0]),
    provenance="trivial",
    properties=(("monotone", "trivial"), ("pseudomonotone", "trivial"), ("pos_homogeneous", "trivial")),
))

_register_bifunction(Bifunction(
    "ones", EUCLID1, 2,
    lambda p, t: np.array([1.0, 1.0]),
    provenance="trivial",
    properties=(("not_monotone", "trivial"),),
))

_register_bifunction(Bifunction(
    "neg-ones", EUCLID1, 2,
    lambda p, t: np.array([-1.0, -1.0]),
    provenance="trivial",
    properties=(("not_upper_sign_continuous", "trivial"),),
))

_register_bifunction(Bifunction(
    "square-v", EUCLID1, 2,
    lambda p, t: np.array([_v(t) ** 2, _v(t) ** 2]),
    provenance="trivial",
    properties=(("not_pos_homogeneous", "trivial"),),
))

_register_bifunction(Bifunction(
    "abs-v", EUCLID1, 2,
    lambda p, t: np.array([abs(_v(t)), abs(_v(t))]),
    provenance="trivial",
    properties=(("pos_homogeneous", "trivial"), ("subadditive", "trivial")),
))

_register_bifunction(Bifunction(
    "const-big", ORTHANT1, 2,
    lambda p, t: np.array([100.0, 100.0]),
    provenance="trivial",
    properties=(("dominates_increments", "derived"),),
))

ADAPTER_PREFIXES = ("dini:", "dini-lower:", "dini+1:", "dini-1:")


def split_adapter_id(adapter_id: str) -> Tuple[str, str]:
    for prefix in ADAPTER_PREFIXES:
        if adapter_id.startswith(prefix):
            return prefix, adapter_id[len(prefix):]
    raise KeyError(adapter_id)


def adapter_from_objective(adapter_id: str, phi: ObjectiveFn, sched: LimitSchedule) -> Bifunction:
    """Directional-derivative adapter h(p, v) = Dini derivative of phi, memoized."""
    prefix, _ = split_adapter_id(adapter_id)
    mode = "lower" if prefix == "dini-lower:" else "upper"
    shift = {"dini+1:": 1.0, "dini-1:": -1.0}.get(prefix, 0.0)
    cache: dict = {}

    def fn(p: Point, t: Tangent) -> np.ndarray:
        key = (p.coords, t.components)
        if key not in cache:
            cache[key] = dini_vector(phi, p, t, sched, mode=mode)
        return cache[key] + shift

    # the tail-quotient estimator carries a one-sided bias of order
    # t_tail * |second derivative| / 2; box-scale tangents on the catalog
    # instances reach second derivatives of a few thousand
    return Bifunction(
        adapter_id, phi.manifold, phi.m, fn,
        provenance="derived",
        properties=(("directional_derivative_adapter", "trivial"),),
        resolution=1e-2,
    )


def get_objective(obj_id: str) -> ObjectiveFn:
    try:
        return OBJECTIVES[obj_id]
    except KeyError:
        raise KeyError(f"unknown objective id {obj_id!r}") from None


def get_bifunction(h_id: str, sched: LimitSchedule = LimitSchedule()) -> Bifunction:
    if h_id in BIFUNCTIONS:
        return BIFUNCTIONS[h_id]
    if h_id.startswith(ADAPTER_PREFIXES):
        _, obj_id = split_adapter_id(h_id)
        return adapter_from_objective(h_id, get_objective(obj_id), sched)
    raise KeyError(f"unknown bifunction id {h_id!r}")


def eval_catalog(h_id: str, p: Point, v: Tangent) -> np.ndarray:
    """Evaluate a catalog bifunction by id."""
    return get_bifunction(h_id).eval(p, v)


# -- problem instances --------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    """Manifold, chart box, grid and the catalog ids an instance wires up."""

    id: str
    manifold: Manifold
    box: Tuple[Tuple[float, float], ...]
    grid_n: int
    objective: Optional[str] = None
    bifunction: Optional[str] = None
    spacing: str = "linear"
    extra_random: int = 0
    seed: int = 42
    provenance: str = "derived"

    def sampler(self, seed: Optional[int] = None, grid_n: Optional[int] = None,
                box: Optional[Tuple[Tuple[float, float], ...]] = None) -> DomainSampler:
        return DomainSampler(
            manifold=self.manifold,
            box=box if box is not None else self.box,
            grid_n=grid_n if grid_n is not None else self.grid_n,
            seed=seed if seed is not None else self.seed,
            extra_random=self.extra_random,
            spacing=self.spacing,
        )

    def describe(self) -> dict:
        return {
            "id": self.id,
            "manifold": self.manifold.describe(),
            "box": [list(b) for b in self.box],
            "grid_n": self.grid_n,
            "spacing": self.spacing,
            "extra_random": self.extra_random,
            "seed": self.seed,
            "objective": self.objective,
            "bifunction": self.bifunction,
            "provenance": self.provenance,
        }


INSTANCES: Dict[str, InstanceSpec] = {}


def _register_instance(spec: InstanceSpec) -> None:
    if spec.id in INSTANCES:
        raise ValueError(f"duplicate instance id {spec.id!r}")
    if spec.objective is not None:
        get_objective(spec.objective)
    if spec.bifunction is not None:
        get_bifunction(spec.bifunction)
    INSTANCES[spec.id] = spec


_register_instance(InstanceSpec(
    "example-3.3", HYPERBOLA, ((0.0, 1.0),), grid_n=5,
    objective="example-3.3", bifunction="dini:example-3.3",
    extra_random=4, provenance="paper",
))
_register_instance(InstanceSpec(
    "neg-square-hyperbola", HYPERBOLA, ((0.0, 1.0),), grid_n=5,
    objective="neg-square-hyperbola",
))
_register_instance(InstanceSpec(
    "paper-monotone", ORTHANT1, ((0.5, 4.0),), grid_n=64,
    bifunction="paper-monotone", spacing="log", provenance="paper",
))
_register_instance(InstanceSpec(
    "linear-ez", EUCLID1, ((0.0, 1.0),), grid_n=51,
    bifunction="linear-ez",
))
_register_instance(InstanceSpec(
    "biobjective-quadratic", ORTHANT1, ((0.5, 5.0),), grid_n=91,
    objective="biobjective-quadratic", bifunction="dini:biobjective-quadratic",
))
_register_instance(InstanceSpec(
    "centered-square", ORTHANT1, ((0.5, 4.0),), grid_n=8,
    objective="centered-square", bifunction="dini:centered-square",
))
_register_instance(InstanceSpec(
    "bimodal-qc", ORTHANT1, ((0.5, 4.0),), grid_n=8,
    objective="bimodal-qc",
))
_register_instance(InstanceSpec(
    "log-square", ORTHANT1, ((0.5, 4.0),), grid_n=9,
    objective="log-square", bifunction="dini:log-square", extra_random=4,
))
_register_instance(InstanceSpec(
    "scaled-identity", ORTHANT1, ((0.5, 4.0),), grid_n=9,
    objective="scaled-identity", bifunction="dini:scaled-identity",
))
_register_instance(InstanceSpec(
    "exp-pair", ORTHANT1, ((0.5, 4.0),), grid_n=9,
    objective="exp-pair", bifunction="dini:exp-pair",
))
_register_instance(InstanceSpec(
    "linear-pair", EUCLID1, ((-1.0, 2.0),), grid_n=9,
    objective="linear-pair", bifunction="dini:linear-pair", provenance="trivial",
))
_register_instance(InstanceSpec(
    "abs-pair", EUCLID1, ((-1.0, 3.0),), grid_n=9,
    objective="abs-pair", bifunction="dini:abs-pair",
))
_register_instance(InstanceSpec(
    "decreasing-pair", EUCLID1, ((0.0, 1.0),), grid_n=6,
    objective="decreasing-pair", bifunction="dini:decreasing-pair", provenance="trivial",
))
_register_instance(InstanceSpec(
    "concave-square", EUCLID1, ((-1.0, 1.0),), grid_n=9,
    objective="concave-square", bifunction="dini:concave-square",
))
_register_instance(InstanceSpec(
    "half-line", EUCLID1, ((0.0, 1.0),), grid_n=21,
    bifunction="half-line-linear", provenance="trivial",
))
_register_instance(InstanceSpec(
    "broken-envelope", ORTHANT1, ((0.5, 4.0),), grid_n=9,
    objective="log-square", bifunction="dini+1:log-square",
))
_register_instance(InstanceSpec(
    "weak-dominated", ORTHANT1, ((0.5, 5.0),), grid_n=21,
    objective="biobjective-quadratic", bifunction="const-big", provenance="trivial",
))


def get_instance(instance_id: str) -> InstanceSpec:
    try:
        return INSTANCES[instance_id]
    except KeyError:
        raise KeyError(f"unknown instance id {instance_id!r}") from None


def with_overrides(spec: InstanceSpec, **kwargs) -> InstanceSpec:
    """Copy of an instance spec with selected fields replaced."""
    return replace(spec, **kwargs)


def catalog_listing() -> dict:
    """Everything the catalog knows, in a serializable form."""

    def props(pairs):
        return [{"tag": tag, "provenance": prov} for tag, prov in pairs]

    return {
        "objectives": [
            {
                "id": o.id,
                "manifold": o.manifold.describe(),
                "m": o.m,
                "smooth_directional": o.analytic_directional is not None,
                "provenance": o.provenance,
                "properties": props(o.properties),
            }
            for o in OBJECTIVES.values()
        ],
        "bifunctions": [
            {
                "id": h.id,
                "manifold": h.manifold.describe(),
                "m": h.m,
                "provenance": h.provenance,
                "properties": props(h.properties),
            }
            for h in BIFUNCTIONS.values()
        ] + [{
            "id": "dini:<objective>, dini-lower:<objective>, dini+1:<objective>, dini-1:<objective>",
            "manifold": None,
            "m": None,
            "provenance": "derived",
            "properties": props(((("directional_derivative_adapter", "trivial"),))),
        }],
        "instances": [spec.describe() for spec in INSTANCES.values()],
    }
