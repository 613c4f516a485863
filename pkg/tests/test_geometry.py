import numpy as np
import pytest
from numpy.testing import assert_allclose

from geoinscribe import geometry as geo
from geoinscribe.errors import AntipodalError, GeometryError
from geoinscribe.geometry import Surface

from conftest import ALL, CURVED

ORIGIN = np.array([1.0, 0.0, 0.0])
NORTH = np.array([0.0, 0.0, 1.0])


def test_surface_curvature_and_aliases():
    assert Surface.HYPERBOLIC.curvature == -1
    assert Surface.SPHERICAL.curvature == 1
    assert Surface.EUCLIDEAN.curvature == 0
    assert Surface("sphere") is Surface.SPHERICAL
    assert Surface("plane") is Surface.EUCLIDEAN


def test_exp_from_hyperboloid_origin():
    t = 0.7
    assert_allclose(geo.exp_map("hyperbolic", ORIGIN, [0, t, 0]), [np.cosh(t), np.sinh(t), 0])


@pytest.mark.parametrize("surface", ALL)
def test_exp_of_zero_is_identity(surface, rng):
    x = geo.random_points(surface, 5, rng)
    assert_allclose(geo.exp_map(surface, x, np.zeros_like(x)), x, atol=1e-15)


def test_exp_quarter_great_circle():
    p = geo.exp_map("spherical", NORTH, [np.pi / 2, 0, 0])
    assert abs(p[2]) < 1e-15
    assert_allclose(geo.distance("spherical", NORTH, p), np.pi / 2)


def test_exp_rejects_long_spherical_vectors():
    with pytest.raises(GeometryError):
        geo.exp_map("spherical", NORTH, [np.pi, 0, 0])


def test_exp_rejects_non_tangent_vector():
    with pytest.raises(GeometryError):
        geo.exp_map("spherical", NORTH, [0, 0, 0.5])


@pytest.mark.parametrize("surface", ALL)
def test_log_of_self_is_zero(surface, rng):
    x = geo.random_points(surface, 4, rng)
    assert_allclose(geo.log_map(surface, x, x), 0.0, atol=1e-15)


def test_log_inverts_exp_example():
    v = geo.log_map("hyperbolic", ORIGIN, [np.cosh(1), np.sinh(1), 0])
    assert_allclose(v, [0, 1, 0], atol=1e-14)


@pytest.mark.parametrize("surface", ALL)
def test_log_exp_roundtrip(surface, rng):
    x = geo.random_points(surface, 1000, rng, 1.5)
    v = geo.random_tangents(surface, x, rng, 2.0, 1e-6)
    assert_allclose(geo.log_map(surface, x, geo.exp_map(surface, x, v)), v, atol=1e-10)
    assert_allclose(geo.distance(surface, x, geo.exp_map(surface, x, v)),
                    geo.tangent_norm(surface, v), atol=1e-10)


def test_log_antipodal_raises():
    with pytest.raises(AntipodalError):
        geo.log_map("spherical", NORTH, -NORTH)


def test_spherical_distances():
    s = "spherical"
    assert geo.distance(s, NORTH, NORTH) == 0.0
    assert_allclose(geo.distance(s, NORTH, [1.0, 0, 0]), np.pi / 2)
    assert_allclose(geo.distance(s, NORTH, -NORTH), np.pi)


@pytest.mark.parametrize("surface", ALL)
def test_distance_symmetric_and_positive(surface, rng):
    p = geo.random_points(surface, 200, rng)
    q = geo.random_points(surface, 200, rng)
    assert_allclose(geo.distance(surface, p, q), geo.distance(surface, q, p), rtol=1e-14)
    assert np.all(geo.distance(surface, p, q) > 0)


def test_hyperbolic_distance_matches_arccosh(rng):
    p = geo.random_points("hyperbolic", 100, rng, 2.0)
    q = geo.random_points("hyperbolic", 100, rng, 2.0)
    ref = np.arccosh(-geo.inner("hyperbolic", p, q))
    assert_allclose(geo.distance("hyperbolic", p, q), ref, rtol=1e-10)


def test_distance_small_separation_is_accurate():
    # arccos/arccosh lose half the digits here; the stable formulas do not
    eps = 1e-9
    p = geo.exp_map("hyperbolic", ORIGIN, [0, eps, 0])
    assert_allclose(geo.distance("hyperbolic", ORIGIN, p), eps, rtol=1e-12)
    q = geo.exp_map("spherical", NORTH, [eps, 0, 0])
    assert_allclose(geo.distance("spherical", NORTH, q), eps, rtol=1e-12)


@pytest.mark.parametrize("surface", ALL)
def test_rotate_tangent(surface, rng):
    x = geo.random_points(surface, 50, rng)
    v = geo.random_tangents(surface, x, rng, 1.0, 0.1)
    assert_allclose(geo.rotate_tangent(surface, x, v, 0.0), v, atol=1e-15)
    assert_allclose(geo.rotate_tangent(surface, x, v, np.pi), -v, atol=1e-14)
    assert_allclose(geo.rotate_tangent(surface, x, v, 2 * np.pi), v, atol=1e-14)
    ang = rng.uniform(0, 2 * np.pi, 50)
    r = geo.rotate_tangent(surface, x, v, ang)
    assert_allclose(geo.tangent_norm(surface, r), geo.tangent_norm(surface, v), rtol=1e-13)
    diff = np.mod(geo.oriented_angle(surface, x, v, r) - ang + np.pi, 2 * np.pi) - np.pi
    assert_allclose(diff, 0, atol=1e-12)


@pytest.mark.parametrize("surface", ALL)
def test_frame_is_oriented_orthonormal(surface, rng):
    x = geo.random_points(surface, 20, rng)
    e1, e2 = geo.frame_at(surface, x)
    assert_allclose(geo.inner(surface, e1, e1), 1, atol=1e-13)
    assert_allclose(geo.inner(surface, e2, e2), 1, atol=1e-13)
    assert_allclose(geo.inner(surface, e1, e2), 0, atol=1e-13)
    assert_allclose(geo.area_form(surface, x, e1, e2), 1, atol=1e-13)


@pytest.mark.parametrize("surface", CURVED)
def test_distance_between_circle_points_depends_on_radius_and_angle(surface, rng):
    r, alpha = 0.8, 1.1
    x = geo.random_points(surface, 100, rng, 1.5)
    v = geo.random_tangents(surface, x, rng, 1.0, 0.5)
    v = r * v / geo.tangent_norm(surface, v)[:, None]
    a = geo.exp_map(surface, x, v)
    b = geo.exp_map(surface, x, geo.rotate_tangent(surface, x, v, alpha))
    d = geo.distance(surface, a, b)
    assert np.ptp(d) < 1e-9


def test_circumference_values():
    assert_allclose(geo.circle_circumference(1.0, "hyperbolic"), 2 * np.pi * np.sinh(1))
    assert_allclose(geo.circle_circumference(1.0, "hyperbolic"), 7.3840, atol=1e-4)
    assert_allclose(geo.circle_circumference(np.pi / 2, "spherical"), 2 * np.pi)
    assert_allclose(geo.circle_circumference(0.3, "euclidean"), 0.6 * np.pi)
    for s in ALL:
        r = 1e-3
        assert abs(geo.circle_circumference(r, s) - 2 * np.pi * r) < 1e-8
    with pytest.raises(GeometryError):
        geo.circle_circumference(0.0, "hyperbolic")


@pytest.mark.parametrize("surface", ALL)
def test_circumference_by_quadrature(surface, rng):
    from scipy.integrate import quad
    x = geo.random_points(surface, 1, rng)[0]
    v = geo.random_tangents(surface, x[None], rng, 1.2, 0.4)[0]
    r = float(geo.tangent_norm(surface, v))

    def speed(t, h=1e-5):
        a = geo.exp_map(surface, x, geo.rotate_tangent(surface, x, v, t + h))
        b = geo.exp_map(surface, x, geo.rotate_tangent(surface, x, v, t - h))
        return float(np.sqrt(abs(geo.inner(surface, a - b, a - b)))) / (2 * h)

    length, _ = quad(speed, 0, 2 * np.pi, limit=200, epsabs=0, epsrel=1e-11)
    assert_allclose(length, geo.circle_circumference(r, surface), rtol=1e-8)


def test_d_exp_radial_direction_gives_unit_velocity(rng):
    for s in CURVED:
        x = geo.random_points(s, 10, rng)
        v = geo.random_tangents(s, x, rng, 1.5, 0.2)
        vt = v / geo.tangent_norm(s, v)[:, None]
        assert_allclose(geo.d_exp(s, x, v, vt), geo.unit_velocity(s, x, v), atol=1e-12)


def test_d_exp_orthogonal_direction_hyperbolic():
    s = "hyperbolic"
    v = np.array([0.0, 1.0, 0.0])
    jv = geo.jrot(s, ORIGIN, v)
    out = geo.d_exp(s, ORIGIN, v, jv)
    assert_allclose(geo.tangent_norm(s, out), np.cosh(1.0), rtol=1e-13)
    assert_allclose(geo.tangent_norm(s, out), 1.5431, atol=1e-4)
    p = geo.exp_map(s, ORIGIN, v)
    jw = geo.jrot(s, p, geo.unit_velocity(s, ORIGIN, v))
    assert_allclose(out, np.cosh(1.0) * jw, atol=1e-13)


def test_d_exp_zero_vector_raises():
    with pytest.raises(GeometryError):
        geo.d_exp("hyperbolic", ORIGIN, np.zeros(3), np.array([0, 1.0, 0]))


def d_exp_fd(surface, x, v, w, h=1e-5):
    """exp at base points moved along w, with v parallel transported along the move."""
    def at(t):
        y = geo.exp_map(surface, x, t * w)
        return geo.exp_map(surface, y, geo.parallel_transport(surface, x, t * w, v))
    return (at(h) - at(-h)) / (2 * h)


@pytest.mark.parametrize("surface", CURVED)
def test_d_exp_matches_finite_differences(surface, rng):
    x = geo.random_points(surface, 300, rng, 1.0)
    v = geo.random_tangents(surface, x, rng, 2.0, 0.05)
    w = geo.random_tangents(surface, x, rng, 1.0, 0.2)
    ref = d_exp_fd(surface, x, v, w)
    out = geo.d_exp(surface, x, v, w)
    err = geo.tangent_norm(surface, out - ref) / np.maximum(geo.tangent_norm(surface, ref), 1e-3)
    assert err.max() < 1e-6


def test_spherical_d_exp_degenerates_at_quarter_circle():
    s = "spherical"
    v = np.array([np.pi / 2, 0.0, 0.0])
    out = geo.d_exp(s, NORTH, v, geo.jrot(s, NORTH, v) / np.pi * 2)
    assert np.all(np.isfinite(out))
    assert geo.tangent_norm(s, out) < 1e-12


@pytest.mark.parametrize("surface", ALL)
def test_parallel_transport_is_isometric(surface, rng):
    x = geo.random_points(surface, 50, rng)
    w = geo.random_tangents(surface, x, rng, 1.0)
    a = geo.random_tangents(surface, x, rng, 1.0)
    b = geo.random_tangents(surface, x, rng, 1.0)
    y = geo.exp_map(surface, x, w)
    ta = geo.parallel_transport(surface, x, w, a)
    tb = geo.parallel_transport(surface, x, w, b)
    geo.check_tangent(surface, y, ta)
    assert_allclose(geo.inner(surface, ta, tb), geo.inner(surface, a, b), atol=1e-12)
    assert_allclose(geo.area_form(surface, y, ta, tb), geo.area_form(surface, x, a, b),
                    atol=1e-12)


def test_check_point_rejects_off_surface():
    with pytest.raises(GeometryError):
        geo.check_point("hyperbolic", [1.0, 0.5, 0.0])
    with pytest.raises(GeometryError):
        geo.check_point("spherical", [0.0, 0.0, 1.1])
    with pytest.raises(GeometryError):
        geo.check_point("euclidean", [0.0, 0.0, 0.1])
    geo.check_point("hyperbolic", geo.project_point("hyperbolic", [1.0, 0.5, 0.0]))
