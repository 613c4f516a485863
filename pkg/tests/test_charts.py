import numpy as np
import pytest

from geoinscribe import charts
from geoinscribe import geometry as geo
from geoinscribe.errors import GeometryError
from geoinscribe.geometry import Surface


def _disk_points(rng, n, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(size=n))
    a = rng.uniform(0, 2 * np.pi, n)
    return np.stack([r * np.cos(a), r * np.sin(a)], axis=1)


def test_disk_distance_matches_hyperboloid(rng):
    z, w = _disk_points(rng, 2000), _disk_points(rng, 2000)
    d_model = geo.distance(Surface.HYPERBOLIC, charts.disk_to_hyperboloid(z),
                           charts.disk_to_hyperboloid(w))
    d_chart = charts.disk_distance(z, w)
    assert np.max(np.abs(d_model - d_chart) / np.maximum(1.0, d_chart)) < 1e-12


def test_disk_lands_on_hyperboloid(rng):
    p = charts.disk_to_hyperboloid(_disk_points(rng, 100))
    geo.check_point(Surface.HYPERBOLIC, p)
    assert np.all(p[:, 0] >= 1)


def test_disk_roundtrip(rng):
    z = _disk_points(rng, 500)
    assert np.allclose(charts.hyperboloid_to_disk(charts.disk_to_hyperboloid(z)), z, atol=1e-14)


def test_disk_rejects_outside():
    with pytest.raises(GeometryError):
        charts.disk_to_hyperboloid([1.0, 0.0])


def test_uhp_roundtrip(rng):
    w = np.stack([rng.normal(size=300), rng.uniform(0.1, 5, 300)], axis=1)
    assert np.allclose(charts.disk_to_uhp(charts.uhp_to_disk(w)), w, atol=1e-10)


def test_uhp_distance_formula(rng):
    w1 = np.stack([rng.normal(size=300), rng.uniform(0.2, 3, 300)], axis=1)
    w2 = np.stack([rng.normal(size=300), rng.uniform(0.2, 3, 300)], axis=1)
    expected = np.arccosh(1 + np.sum((w1 - w2) ** 2, axis=1) / (2 * w1[:, 1] * w2[:, 1]))
    got = geo.distance(Surface.HYPERBOLIC, charts.from_chart("upper-half-plane", w1),
                       charts.from_chart("upper-half-plane", w2))
    assert np.allclose(got, expected, rtol=1e-10)


def test_uhp_i_is_origin():
    assert np.allclose(charts.from_chart("upper-half-plane", [0.0, 1.0]), [1, 0, 0])


def test_uhp_rejects_lower_half():
    with pytest.raises(GeometryError):
        charts.uhp_to_disk([0.0, -1.0])


def test_stereo_roundtrip_and_origin(rng):
    u = rng.normal(size=(300, 2))
    p = charts.stereo_to_sphere(u)
    assert np.allclose(np.linalg.norm(p, axis=1), 1)
    assert np.allclose(charts.sphere_to_stereo(p), u, atol=1e-12)
    assert np.allclose(charts.stereo_to_sphere([0.0, 0.0]), [0, 0, 1])


def test_stereo_unit_circle_is_equator():
    a = np.linspace(0, 2 * np.pi, 9)
    p = charts.stereo_to_sphere(np.stack([np.cos(a), np.sin(a)], axis=1))
    assert np.allclose(p[:, 2], 0, atol=1e-15)


def test_plane_chart():
    p = charts.from_chart("plane", [[1.0, 2.0]])
    assert np.array_equal(p, [[1.0, 2.0, 0.0]])
    assert np.array_equal(charts.to_chart("plane", p), [[1.0, 2.0]])


@pytest.mark.parametrize("chart", sorted(charts.CHARTS))
def test_to_chart_inverts_from_chart(chart, rng):
    if chart == "embedded-r3":
        c = geo.random_points(Surface.SPHERICAL, 20, rng)
    elif chart == "upper-half-plane":
        c = np.stack([rng.normal(size=20), rng.uniform(0.5, 2, 20)], axis=1)
    else:
        c = 0.5 * rng.uniform(-1, 1, (20, 2))
    assert np.allclose(charts.to_chart(chart, charts.from_chart(chart, c)), c, atol=1e-12)


def test_unknown_chart():
    with pytest.raises(GeometryError):
        charts.from_chart("mercator", [0.0, 0.0])


@pytest.mark.parametrize("surface", ["hyperbolic", "spherical", "euclidean"])
def test_planar_coords_preserve_orientation(surface):
    s = Surface(surface)
    center = {Surface.HYPERBOLIC: np.array([1.0, 0, 0]), Surface.SPHERICAL: np.array([0, 0, 1.0]),
              Surface.EUCLIDEAN: np.zeros(3)}[s]
    e1, e2 = geo.frame_at(s, center)
    a = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    v = 0.4 * (np.cos(a)[:, None] * e1 + np.sin(a)[:, None] * e2)
    xy = charts.planar_coords(s, geo.exp_map(s, center, v))
    x, y = xy[:, 0], xy[:, 1]
    assert np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) > 0
