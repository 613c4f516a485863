"""Chart conversions between planar coordinates and the model surfaces."""

from __future__ import annotations

import numpy as np

from . import geometry as geo
from .errors import GeometryError
from .geometry import Surface

CHARTS = {
    "poincare-disk": Surface.HYPERBOLIC,
    "upper-half-plane": Surface.HYPERBOLIC,
    "stereographic": Surface.SPHERICAL,
    "embedded-r3": Surface.SPHERICAL,
    "plane": Surface.EUCLIDEAN,
}
DEFAULT_CHART = {
    Surface.HYPERBOLIC: "poincare-disk",
    Surface.SPHERICAL: "stereographic",
    Surface.EUCLIDEAN: "plane",
}


def disk_to_hyperboloid(z):
    z = np.asarray(z, dtype=float)
    r2 = np.sum(z * z, axis=-1)
    if np.any(r2 >= 1.0):
        raise GeometryError("Poincare disk coordinates must lie inside the unit disk")
    den = (1.0 - r2)[..., None]
    return np.concatenate([(1.0 + r2)[..., None], 2.0 * z], axis=-1) / den


def hyperboloid_to_disk(p):
    p = np.asarray(p, dtype=float)
    return p[..., 1:] / (1.0 + p[..., :1])


def uhp_to_disk(w):
    """Cayley map ``(w - i) / (w + i)``."""
    w = np.asarray(w, dtype=float)
    if np.any(w[..., 1] <= 0):
        raise GeometryError("upper half-plane coordinates need y > 0")
    c = w[..., 0] + 1j * w[..., 1]
    z = (c - 1j) / (c + 1j)
    return np.stack([z.real, z.imag], axis=-1)


def disk_to_uhp(z):
    z = np.asarray(z, dtype=float)
    c = z[..., 0] + 1j * z[..., 1]
    w = 1j * (1 + c) / (1 - c)
    return np.stack([w.real, w.imag], axis=-1)


def stereo_to_sphere(u):
    """Inverse stereographic projection from the south pole (origin -> north pole)."""
    u = np.asarray(u, dtype=float)
    r2 = np.sum(u * u, axis=-1)[..., None]
    return np.concatenate([2.0 * u, 1.0 - r2], axis=-1) / (1.0 + r2)


def sphere_to_stereo(p):
    p = np.asarray(p, dtype=float)
    return p[..., :2] / (1.0 + p[..., 2:])


def disk_distance(z, w):
    """Closed-form hyperbolic distance in the Poincare disk."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    num = 2.0 * np.sum((z - w) ** 2, axis=-1)
    den = (1.0 - np.sum(z * z, axis=-1)) * (1.0 - np.sum(w * w, axis=-1))
    return np.arccosh(1.0 + num / den)


def from_chart(chart, coords):
    """Embedding coordinates of chart points (3-vectors pass through for embedded-r3)."""
    coords = np.asarray(coords, dtype=float)
    if chart == "poincare-disk":
        return disk_to_hyperboloid(coords)
    if chart == "upper-half-plane":
        return disk_to_hyperboloid(uhp_to_disk(coords))
    if chart == "stereographic":
        return stereo_to_sphere(coords)
    if chart == "embedded-r3":
        return coords / np.linalg.norm(coords, axis=-1, keepdims=True)
    if chart == "plane":
        return np.concatenate([coords, np.zeros(coords.shape[:-1] + (1,))], axis=-1)
    raise GeometryError(f"unknown chart {chart!r}")


def to_chart(chart, points):
    points = np.asarray(points, dtype=float)
    if chart == "poincare-disk":
        return hyperboloid_to_disk(points)
    if chart == "upper-half-plane":
        return disk_to_uhp(hyperboloid_to_disk(points))
    if chart == "stereographic":
        return sphere_to_stereo(points)
    if chart == "embedded-r3":
        return points
    if chart == "plane":
        return points[..., :2]
    raise GeometryError(f"unknown chart {chart!r}")


def _rotation_to_north(a):
    """Orthogonal matrix sending the unit vector ``a`` to (0, 0, 1)."""
    n = np.array([0.0, 0.0, 1.0])
    c = float(a @ n)
    if c < -1 + 1e-12:
        return np.diag([1.0, -1.0, -1.0])
    k = np.cross(a, n)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + kx + kx @ kx / (1.0 + c)


def planar_coords(surface, points):
    """Orientation-preserving planar picture of a point set (for simplicity and plots)."""
    surface = geo.as_surface(surface)
    points = np.asarray(points, dtype=float)
    if surface is Surface.HYPERBOLIC:
        return hyperboloid_to_disk(points)
    if surface is Surface.EUCLIDEAN:
        return points[..., :2]
    mean = points.reshape(-1, 3).mean(axis=0)
    if np.linalg.norm(mean) > 1e-3:
        center = mean / np.linalg.norm(mean)
    else:
        cands = np.concatenate([np.eye(3), -np.eye(3)])
        gap = [np.min(geo.distance(surface, points.reshape(-1, 3), -c)) for c in cands]
        center = cands[int(np.argmax(gap))]
    R = _rotation_to_north(center)
    return sphere_to_stereo(points @ R.T)
