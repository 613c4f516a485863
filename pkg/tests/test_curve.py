import numpy as np
import pytest

from geoinscribe import charts
from geoinscribe import geometry as geo
from geoinscribe.curve import SampledCurve, circular_gap
from geoinscribe.errors import GeometryError
from geoinscribe.geometry import Surface


def _disk_curve(n=256, r=0.5, wobble=0.0):
    t = np.arange(n) / n
    rad = r + wobble * np.cos(6 * np.pi * t)
    z = rad[:, None] * np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], axis=1)
    return charts.disk_to_hyperboloid(z)


def test_samples_interpolated_exactly():
    sc = SampledCurve("hyperbolic", _disk_curve())
    assert np.allclose(sc(sc.params), sc.points, atol=1e-14)
    assert np.allclose(sc(sc.params + 1.0), sc.points, atol=1e-13)


def test_evaluation_stays_on_surface():
    sc = SampledCurve("hyperbolic", _disk_curve())
    geo.check_point(Surface.HYPERBOLIC, sc(np.linspace(0, 1, 1000)))


def test_too_few_samples():
    with pytest.raises(GeometryError, match="at least"):
        SampledCurve("hyperbolic", _disk_curve(n=32))


def test_spacing_limit():
    with pytest.raises(GeometryError, match="spacing"):
        SampledCurve("hyperbolic", _disk_curve(n=64, r=0.9))


def test_self_intersection_rejected():
    t = np.arange(400) / 400
    a = 2 * np.pi * t
    # figure eight
    xy = 0.3 * np.stack([np.sin(a + 0.01), np.sin(a + 0.01) * np.cos(a + 0.01)], axis=1)
    with pytest.raises(GeometryError, match="simple"):
        SampledCurve("euclidean", charts.from_chart("plane", xy))


def test_repeated_samples_rejected():
    p = _disk_curve()
    p[5] = p[4]
    with pytest.raises(GeometryError):
        SampledCurve("hyperbolic", p)


def test_diameter_of_disk_circle():
    sc = SampledCurve("hyperbolic", _disk_curve(n=512))
    assert sc.diameter == pytest.approx(2 * 2 * np.arctanh(0.5), rel=1e-12)


def test_antipodal_clearance():
    a = 2 * np.pi * np.arange(256) / 256
    p = np.stack([0.5 * np.cos(a), 0.5 * np.sin(a), np.full_like(a, np.sqrt(0.75))], axis=1)
    sc = SampledCurve("spherical", p)
    assert sc.antipodal_clearance == pytest.approx(np.pi - 2 * np.arcsin(0.5), rel=1e-12)
    assert SampledCurve("hyperbolic", _disk_curve()).antipodal_clearance == np.inf


def test_orientation_sign():
    p = _disk_curve()
    assert SampledCurve("hyperbolic", p).orientation() == 1
    assert SampledCurve("hyperbolic", p[::-1]).orientation() == -1


def test_project_foot_and_sign():
    sc = SampledCurve("hyperbolic", _disk_curve(n=512, wobble=0.05))
    u0 = np.array([0.1, 0.37, 0.8])
    c, T = sc(u0), sc.tangent(u0)
    nrm = geo.jrot(Surface.HYPERBOLIC, c, T)
    nrm /= geo.tangent_norm(Surface.HYPERBOLIC, nrm)[:, None]
    for off in (0.01, -0.02):
        X = geo.exp_map(Surface.HYPERBOLIC, c, off * nrm)
        u, d = sc.project(X)
        assert np.allclose(circular_gap(u, u0), 0, atol=1e-9)
        assert np.allclose(d, off, atol=1e-9)


def test_project_on_curve_is_zero():
    sc = SampledCurve("hyperbolic", _disk_curve(n=512, wobble=0.05))
    u = np.linspace(0, 1, 77, endpoint=False) + 0.003
    _, d = sc.project(sc(u))
    assert np.max(np.abs(d)) < 1e-12


def test_shifted_curve():
    sc = SampledCurve("hyperbolic", _disk_curve())
    sh = sc.shifted(10)
    assert np.allclose(sh(0.0), sc(10 / 256))
    assert np.allclose(sh(0.3), sc(0.3 + 10 / 256), atol=1e-14)


def test_circular_gap():
    assert circular_gap(0.95, 0.05) == pytest.approx(0.1)
    assert circular_gap(0.2, 0.2) == 0
    assert circular_gap(0.0, 0.5) == pytest.approx(0.5)
