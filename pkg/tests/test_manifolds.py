"""Geometry kernels against independent numerical oracles."""

import math

import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp

from vvilab import (
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
    parallel_transport,
)

ORTH1 = PositiveOrthant(1)
ORTH2 = PositiveOrthant(2)
EUC2 = Euclidean(2)
HYP = HyperbolaCurve()
HYP_CS = HyperbolaCurve(GeodesicMode.CONSTANT_SPEED)


def orthant_geodesic_ode(x0, v0, t_end=1.0):
    """Integrate the geodesic equation x'' = (x')^2 / x componentwise."""
    n = len(x0)

    def rhs(t, y):
        x, xdot = y[:n], y[n:]
        return np.concatenate([xdot, xdot * xdot / x])

    sol = solve_ivp(rhs, (0.0, t_end), np.concatenate([x0, v0]),
                    rtol=1e-12, atol=1e-12, dense_output=True)
    assert sol.success
    return sol


def test_exp_orthant_paper_value():
    p = Point(ORTH1, (1.0,))
    q = exp_map(p, Tangent(p, (1.0,)))
    assert q.coords[0] == pytest.approx(math.e, abs=1e-12)


def test_exp_zero_velocity_fixes_point():
    for mani, coords in ((ORTH2, (1.5, 0.3)), (EUC2, (-2.0, 4.0)), (HYP, (0.7,)), (HYP_CS, (0.7,))):
        p = Point(mani, coords)
        q = exp_map(p, Tangent(p, (0.0,) * len(coords)))
        assert q.coords == p.coords


def test_exp_orthant_matches_geodesic_ode_oracle():
    # oracle: numeric integration of the geodesic equation for g = uv/p^2
    x0, v0 = np.array([1.0, 2.0]), np.array([1.0, 0.0])
    sol = orthant_geodesic_ode(x0, v0)
    oracle = sol.y[:2, -1]
    np.testing.assert_allclose(oracle, [math.e, 2.0], atol=1e-9)
    p = Point(ORTH2, tuple(x0))
    q = exp_map(p, Tangent(p, tuple(v0)))
    np.testing.assert_allclose(q.coords, [math.e, 2.0], atol=1e-12)
    np.testing.assert_allclose(q.coords, oracle, atol=1e-9)


def test_log_orthant_paper_value():
    p = Point(ORTH1, (1.0,))
    q = Point(ORTH1, (math.e,))
    assert log_map(p, q).components[0] == pytest.approx(1.0, abs=1e-12)


def test_log_same_point_is_zero():
    p = Point(ORTH2, (0.7, 3.0))
    assert log_map(p, p).components == (0.0, 0.0)


def test_log_euclidean_is_subtraction():
    p = Point(EUC2, (0.0, 0.0))
    q = Point(EUC2, (3.0, 4.0))
    assert log_map(p, q).components == (3.0, 4.0)


def test_transport_orthant_matches_transport_ode_oracle():
    # oracle: integrate V' = (gamma'/gamma) V along gamma(t) = e^{t ln 2}
    a = math.log(2.0)
    sol = solve_ivp(lambda t, y: [a * y[0]], (0.0, 1.0), [3.0], rtol=1e-12, atol=1e-12)
    oracle = sol.y[0, -1]
    assert oracle == pytest.approx(6.0, abs=1e-8)
    p = Point(ORTH1, (1.0,))
    q = Point(ORTH1, (2.0,))
    out = parallel_transport(p, q, Tangent(p, (3.0,)))
    assert out.base == q
    assert out.components[0] == pytest.approx(6.0, abs=1e-12)
    assert out.components[0] == pytest.approx(oracle, abs=1e-8)


def test_transport_to_same_point_is_identity():
    p = Point(ORTH2, (1.0, 2.0))
    v = Tangent(p, (0.5, -0.25))
    assert parallel_transport(p, p, v).components == v.components


def test_transport_euclidean_flat():
    p = Point(EUC2, (0.0, 0.0))
    q = Point(EUC2, (5.0, 5.0))
    out = parallel_transport(p, q, Tangent(p, (1.0, -1.0)))
    assert out.components == (1.0, -1.0)
    assert out.base == q


def test_geodesic_hyperbola_paper_parameterization():
    p = Point(HYP, (0.0,))
    q = Point(HYP, (1.0,))
    for t in (0.0, 0.3, 0.5, 1.0):
        g = geodesic_point(p, q, t)
        assert g.coords[0] == pytest.approx(t, abs=1e-15)
        embedded = HYP.embed(g.array)
        np.testing.assert_allclose(embedded, [t, math.sqrt(1 + t * t)], atol=1e-15)


def test_geodesic_endpoint_t0():
    p = Point(ORTH2, (0.5, 2.0))
    q = Point(ORTH2, (3.0, 1.0))
    assert geodesic_point(p, q, 0.0).coords == p.coords


def test_geodesic_orthant_midpoint_matches_ode_oracle():
    sol = orthant_geodesic_ode(np.array([1.0]), np.array([2.0]))
    oracle_mid = sol.sol(0.5)[0]
    assert oracle_mid == pytest.approx(math.e, abs=1e-9)
    p = Point(ORTH1, (1.0,))
    q = Point(ORTH1, (math.e**2,))
    g = geodesic_point(p, q, 0.5)
    assert g.coords[0] == pytest.approx(math.e, abs=1e-12)


def test_inner_orthant_paper_metric():
    p = Point(ORTH1, (2.0,))
    u = Tangent(p, (2.0,))
    assert inner(p, u, u) == pytest.approx(1.0, abs=1e-15)


def test_inner_zero_vector():
    p = Point(EUC2, (1.0, 1.0))
    assert inner(p, Tangent(p, (0.0, 0.0)), Tangent(p, (3.0, -1.0))) == 0.0


def test_inner_hyperbola_matches_embedding_oracle():
    # oracle: finite-difference arc length of the embedding around x = 0
    h = 1e-6
    e = lambda x: np.array([x, math.sqrt(1 + x * x)])
    d = (e(h) - e(-h)) / (2 * h)
    oracle = float(d @ d)
    assert oracle == pytest.approx(1.0, abs=1e-9)
    p = Point(HYP, (0.0,))
    u = Tangent(p, (1.0,))
    assert inner(p, u, u) == pytest.approx(1.0, abs=1e-12)
    # and off the origin the induced metric is 1 + x^2/(1+x^2)
    x = 0.8
    d = (e(x + h) - e(x - h)) / (2 * h)
    p2 = Point(HYP, (x,))
    assert inner(p2, Tangent(p2, (1.0,)), Tangent(p2, (1.0,))) == pytest.approx(float(d @ d), abs=1e-9)


def test_distance_orthant_matches_arclength_oracle():
    # oracle: arc length integral of gamma(t) = e^t under |v|/p
    oracle, err = quad(lambda t: abs(math.exp(t)) / math.exp(t), 0.0, 1.0)
    assert oracle == pytest.approx(1.0, abs=1e-10)
    p = Point(ORTH1, (1.0,))
    q = Point(ORTH1, (math.e,))
    assert distance(p, q) == pytest.approx(1.0, abs=1e-12)


def test_distance_identity_and_euclidean():
    p = Point(ORTH2, (0.4, 2.2))
    assert distance(p, p) == 0.0
    a = Point(EUC2, (0.0, 0.0))
    b = Point(EUC2, (3.0, 4.0))
    assert distance(a, b) == pytest.approx(5.0, abs=1e-15)


def test_hyperbola_distance_matches_quad_oracle():
    speed = lambda x: math.sqrt(1 + x * x / (1 + x * x))
    oracle, _ = quad(speed, -0.4, 1.3, epsabs=1e-13)
    p = Point(HYP_CS, (-0.4,))
    q = Point(HYP_CS, (1.3,))
    assert distance(p, q) == pytest.approx(oracle, abs=1e-10)
    # paper-mode distance is the same arc length (parameterization independent)
    assert distance(Point(HYP, (-0.4,)), Point(HYP, (1.3,))) == pytest.approx(oracle, abs=1e-10)


def _random_config(rng, mani):
    if isinstance(mani, PositiveOrthant):
        p = Point(mani, tuple(np.exp(rng.uniform(-1.5, 1.6, mani.n))))
        q = Point(mani, tuple(np.exp(rng.uniform(-1.5, 1.6, mani.n))))
        v = Tangent(p, tuple(rng.uniform(-1.0, 1.0, mani.n) * p.array))
    elif isinstance(mani, Euclidean):
        p = Point(mani, tuple(rng.normal(0, 2, mani.n)))
        q = Point(mani, tuple(rng.normal(0, 2, mani.n)))
        v = Tangent(p, tuple(rng.normal(0, 1, mani.n)))
    else:
        p = Point(mani, (rng.uniform(-2, 2),))
        q = Point(mani, (rng.uniform(-2, 2),))
        v = Tangent(p, (rng.uniform(-1.5, 1.5),))
    return p, q, v


@pytest.mark.parametrize("mani", [EUC2, ORTH2, HYP_CS], ids=["euclidean", "orthant", "hyperbola-cs"])
def test_geometry_identities_random_sweep(mani):
    rng = np.random.default_rng(7)
    for _ in range(120):
        p, q, v = _random_config(rng, mani)
        if q.coords == p.coords:
            continue
        # exp/log roundtrips
        np.testing.assert_allclose(log_map(p, exp_map(p, v)).components, v.components, atol=1e-9)
        np.testing.assert_allclose(exp_map(p, log_map(p, q)).coords, q.coords, atol=1e-9)
        # geodesic endpoints
        np.testing.assert_allclose(geodesic_point(p, q, 0.0).coords, p.coords, atol=1e-9)
        np.testing.assert_allclose(geodesic_point(p, q, 1.0).coords, q.coords, atol=1e-9)
        # splitting identities at interior points
        base = log_map(p, q)
        rev = log_map(q, p)
        for s in (0.25, 0.5, 0.75):
            w = geodesic_point(p, q, s)
            carried = parallel_transport(p, w, base).array
            np.testing.assert_allclose(log_map(w, p).array, -s * carried, atol=1e-8)
            np.testing.assert_allclose(log_map(w, q).array, (1 - s) * carried, atol=1e-8)
            np.testing.assert_allclose(
                log_map(w, p).array, s * parallel_transport(q, w, rev).array, atol=1e-8)
        # transport isometry
        u = Tangent(p, tuple(0.3 * np.asarray(v.components) + 0.1))
        lhs = inner(q, parallel_transport(p, q, u), parallel_transport(p, q, v))
        np.testing.assert_allclose(lhs, inner(p, u, v), atol=1e-9)
        # distance axioms
        np.testing.assert_allclose(distance(p, q), distance(q, p), atol=1e-9)
        assert distance(p, p) <= 1e-9


def test_paper_mode_roundtrips_and_endpoints():
    rng = np.random.default_rng(11)
    for _ in range(60):
        p = Point(HYP, (rng.uniform(-2, 2),))
        q = Point(HYP, (rng.uniform(-2, 2),))
        v = Tangent(p, (rng.uniform(-1.5, 1.5),))
        np.testing.assert_allclose(log_map(p, exp_map(p, v)).components, v.components, atol=1e-12)
        np.testing.assert_allclose(exp_map(p, log_map(p, q)).coords, q.coords, atol=1e-12)
        np.testing.assert_allclose(geodesic_point(p, q, 1.0).coords, q.coords, atol=1e-12)


def test_dimension_and_base_mismatch_errors():
    p = Point(ORTH2, (1.0, 2.0))
    other = Point(ORTH1, (1.0,))
    with pytest.raises(ValueError):
        log_map(p, other)
    with pytest.raises(ValueError):
        Tangent(p, (1.0,))
    q = Point(ORTH2, (2.0, 2.0))
    with pytest.raises(ValueError):
        exp_map(q, Tangent(p, (1.0, 1.0)))
    with pytest.raises(ValueError):
        inner(p, Tangent(p, (1.0, 0.0)), Tangent(q, (1.0, 0.0)))


def test_orthant_overflow_is_range_error():
    p = Point(ORTH1, (1.0,))
    with pytest.raises(RangeError):
        exp_map(p, Tangent(p, (800.0,)))


def test_orthant_rejects_nonpositive_coords():
    with pytest.raises(ValueError):
        Point(ORTH1, (0.0,))
    with pytest.raises(ValueError):
        Point(ORTH2, (1.0, -2.0))


def test_geodesic_parameter_out_of_range():
    p = Point(EUC2, (0.0, 0.0))
    q = Point(EUC2, (1.0, 1.0))
    with pytest.raises(ValueError):
        geodesic_point(p, q, 1.5)
    with pytest.raises(ValueError):
        geodesic_point(p, q, -0.1)
