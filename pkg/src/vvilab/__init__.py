"""Geodesic-convexity checkers and brute-force vector variational
inequality solvers on Hadamard-type model manifolds."""

__version__ = "0.1.0"

from .cone import ConeStatus, classify, in_set  # noqa: F401
from .dini import LimitSchedule, ObjectiveFn, dini_lower, dini_upper, dini_vector  # noqa: F401
from .manifolds import (  # noqa: F401
    Euclidean,
    GeodesicMode,
    HyperbolaCurve,
    Point,
    PositiveOrthant,
    RangeError,
    Tangent,
    distance,
    exp_map,
    geodesic_point,
    inner,
    log_map,
    norm,
    parallel_transport,
)
from .sampling import CheckOutcome, DomainSampler, Witness  # noqa: F401
