"""Dini derivative estimator: worked values, analytic agreement, edge cases."""

import math

import numpy as np
import pytest

from vvilab import (
    Euclidean,
    HyperbolaCurve,
    LimitSchedule,
    Point,
    PositiveOrthant,
    Tangent,
    dini_lower,
    dini_upper,
    dini_vector,
)
from vvilab import catalog

EUC1 = Euclidean(1)
ORTH1 = PositiveOrthant(1)

SCHED = LimitSchedule()  # t0=1e-2, ratio=0.5, steps=20


def test_smooth_square_upper_and_lower():
    p = Point(EUC1, (1.0,))
    v = Tangent(p, (1.0,))
    f = lambda pt: pt.coords[0] ** 2
    assert dini_upper(f, p, v, SCHED) == pytest.approx(2.0, abs=1e-4)
    assert dini_lower(f, p, v, SCHED) == pytest.approx(2.0, abs=1e-4)


def test_one_sided_derivative_of_abs():
    p = Point(EUC1, (0.0,))
    v = Tangent(p, (1.0,))
    assert dini_upper(lambda pt: abs(pt.coords[0]), p, v, SCHED) == pytest.approx(1.0, abs=1e-10)
    assert dini_lower(lambda pt: -abs(pt.coords[0]), p, v, SCHED) == pytest.approx(-1.0, abs=1e-10)


def test_log_along_orthant_geodesic():
    # f(exp_1(t)) = ln(e^t) = t, so the one-sided derivative is exactly 1;
    # the estimate only carries exp/log rounding amplified by 1/t
    p = Point(ORTH1, (1.0,))
    v = Tangent(p, (1.0,))
    f = lambda pt: math.log(pt.coords[0])
    assert dini_upper(f, p, v, SCHED) == pytest.approx(1.0, abs=1e-7)
    assert dini_lower(f, p, v, SCHED) == pytest.approx(1.0, abs=1e-7)


def test_vector_estimate_on_hyperbola_chart_origin():
    # composition along the chart-affine geodesic is (t^2, 1 + t^2)
    phi = catalog.get_objective("example-3.3")
    p = Point(phi.manifold, (0.0,))
    v = Tangent(p, (1.0,))
    est = dini_vector(phi, p, v, SCHED, mode="upper")
    np.testing.assert_allclose(est, [0.0, 0.0], atol=1e-4)


def test_vector_estimate_zero_velocity():
    phi = catalog.get_objective("biobjective-quadratic")
    p = Point(phi.manifold, (1.0,))
    est = dini_vector(phi, p, Tangent(p, (0.0,)), SCHED)
    np.testing.assert_array_equal(est, [0.0, 0.0])


def test_vector_estimate_biobjective_chain_rule():
    # d/dt ((e^t - 2)^2, (e^t - 3)^2) at t=0+ is (-2, -4)
    phi = catalog.get_objective("biobjective-quadratic")
    p = Point(phi.manifold, (1.0,))
    v = Tangent(p, (1.0,))
    est = dini_vector(phi, p, v, SCHED, mode="upper")
    np.testing.assert_allclose(est, [-2.0, -4.0], atol=1e-4)
    est = dini_vector(phi, p, v, SCHED, mode="lower")
    np.testing.assert_allclose(est, [-2.0, -4.0], atol=1e-4)


def _smooth_triples():
    triples = []
    for obj_id, coords_list in (
        ("example-3.3", [(0.0,), (0.3,), (0.8,)]),
        ("biobjective-quadratic", [(1.0,), (1.5,), (2.5,)]),
        ("log-square", [(1.0,), (2.0,), (0.7,)]),
        ("scaled-identity", [(1.0,), (2.0,)]),
        ("exp-pair", [(1.0,), (1.5,)]),
        ("linear-pair", [(0.0,), (1.0,)]),
        ("concave-square", [(0.5,), (-0.5,)]),
    ):
        phi = catalog.get_objective(obj_id)
        for coords in coords_list:
            p = Point(phi.manifold, coords)
            for comps in ((1.0,), (-0.5,)):
                triples.append((phi, p, Tangent(p, comps)))
    return triples


def test_estimates_match_analytic_directional():
    triples = _smooth_triples()
    assert len(triples) >= 20
    for phi, p, v in triples:
        exact = phi.analytic_directional(p, v)
        np.testing.assert_allclose(dini_vector(phi, p, v, SCHED, "upper"), exact, atol=1e-4)
        np.testing.assert_allclose(dini_vector(phi, p, v, SCHED, "lower"), exact, atol=1e-4)


def test_lower_never_exceeds_upper():
    for phi, p, v in _smooth_triples():
        up = dini_vector(phi, p, v, SCHED, "upper")
        lo = dini_vector(phi, p, v, SCHED, "lower")
        assert np.all(lo <= up + 1e-12)
    # and on a genuinely nonsmooth case
    phi = catalog.get_objective("abs-pair")
    p = Point(phi.manifold, (1.0,))
    v = Tangent(p, (1.0,))
    assert np.all(dini_vector(phi, p, v, SCHED, "lower") <= dini_vector(phi, p, v, SCHED, "upper") + 1e-12)


def test_estimator_positive_homogeneity():
    for phi, p, v in _smooth_triples():
        base_u = dini_vector(phi, p, v, SCHED, "upper")
        base_l = dini_vector(phi, p, v, SCHED, "lower")
        for a in (0.5, 2.0):
            scaled_u = dini_vector(phi, p, v.scaled(a), SCHED, "upper")
            scaled_l = dini_vector(phi, p, v.scaled(a), SCHED, "lower")
            assert np.max(np.abs(scaled_u - a * base_u)) <= 1e-3 * (1 + abs(a))
            assert np.max(np.abs(scaled_l - a * base_l)) <= 1e-3 * (1 + abs(a))


def test_divergent_quotients_report_infinity():
    p = Point(EUC1, (0.0,))
    v = Tangent(p, (1.0,))

    def spike(pt):
        x = pt.coords[0]
        return 0.0 if x == 0.0 else 1.0 / abs(x)

    assert dini_upper(spike, p, v, SCHED) == math.inf
    assert dini_lower(lambda pt: -spike(pt), p, v, SCHED) == -math.inf


def test_feasibility_truncation_skips_and_errors():
    p = Point(EUC1, (0.0,))
    v = Tangent(p, (1.0,))
    f = lambda pt: pt.coords[0]
    # only steps below 0.005 are feasible: estimate still converges
    ok = dini_upper(f, p, v, SCHED, feasible=lambda pt: pt.coords[0] < 0.005)
    assert ok == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        dini_upper(f, p, v, SCHED, feasible=lambda pt: False)


def test_schedule_validation():
    with pytest.raises(ValueError):
        LimitSchedule(t0=0.0)
    with pytest.raises(ValueError):
        LimitSchedule(ratio=1.0)
    with pytest.raises(ValueError):
        LimitSchedule(steps=0)
    times = LimitSchedule(0.01, 0.5, 20).times()
    assert all(a > b for a, b in zip(times, times[1:]))
    assert times[-1] > 9.4e-9  # smallest step stays above rounding noise
