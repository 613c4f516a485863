"""Constant-curvature surface primitives in embedding coordinates.

Points and tangent vectors are plain ``(..., 3)`` float arrays; every
function broadcasts over leading axes.  The three model surfaces are

* hyperbolic: upper sheet of ``-t^2 + x^2 + y^2 = -1`` in Minkowski space,
  origin ``(1, 0, 0)``;
* spherical: the unit sphere in R^3;
* euclidean: the plane ``z = 0``.

The complex structure ``j`` (rotation by +90 degrees) is fixed by the outward
normal (sphere), the upward normal ``e_z`` (plane) and the orientation of the
hyperboloid that projects to the standard orientation of the Poincare disk.
With this choice ``area_form(x, a, b) == inner(jrot(x, a), b)`` on all three
surfaces.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import AntipodalError, GeometryError

POINT_TOL = 1e-12
_CHECK_TOL = 1e-9
_MINKOWSKI = np.array([-1.0, 1.0, 1.0])
_EZ = np.array([0.0, 0.0, 1.0])


class Surface(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"

    @classmethod
    def _missing_(cls, value):
        aliases = {"sphere": "spherical", "hyp": "hyperbolic", "plane": "euclidean",
                   "h2": "hyperbolic", "s2": "spherical", "r2": "euclidean"}
        if isinstance(value, str):
            key = value.lower()
            key = aliases.get(key, key)
            for member in cls:
                if member.value == key:
                    return member
        return None

    @property
    def curvature(self) -> float:
        return {"hyperbolic": -1.0, "spherical": 1.0, "euclidean": 0.0}[self.value]


def as_surface(surface) -> Surface:
    return surface if isinstance(surface, Surface) else Surface(surface)


# ---------------------------------------------------------------------------
# metric helpers

def inner(surface, a, b):
    """Ambient bilinear form restricting to the surface metric on tangent vectors."""
    surface = as_surface(surface)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if surface is Surface.HYPERBOLIC:
        return np.sum(a * b * _MINKOWSKI, axis=-1)
    return np.sum(a * b, axis=-1)


def tangent_norm(surface, v):
    return np.sqrt(np.maximum(inner(surface, v, v), 0.0))


def normal(surface, x):
    """Unit normal fixing the orientation (a point of the surface for H and S)."""
    surface = as_surface(surface)
    x = np.asarray(x, dtype=float)
    if surface is Surface.EUCLIDEAN:
        return np.broadcast_to(_EZ, x.shape)
    return x


def jrot(surface, x, v):
    """Rotate the tangent vector ``v`` at ``x`` by +90 degrees."""
    surface = as_surface(surface)
    out = np.cross(normal(surface, x), np.asarray(v, dtype=float))
    if surface is Surface.HYPERBOLIC:
        out = out * _MINKOWSKI
    return out


def area_form(surface, x, a, b):
    """Riemannian area form of the surface at ``x`` evaluated on ``(a, b)``."""
    n = normal(surface, x)
    return np.sum(n * np.cross(a, b), axis=-1)


def project_point(surface, p):
    """Closest-in-spirit point of the model surface (renormalization)."""
    surface = as_surface(surface)
    p = np.array(p, dtype=float)
    if surface is Surface.SPHERICAL:
        return p / np.linalg.norm(p, axis=-1, keepdims=True)
    if surface is Surface.HYPERBOLIC:
        p[..., 0] = np.sqrt(1.0 + p[..., 1] ** 2 + p[..., 2] ** 2)
        return p
    p[..., 2] = 0.0
    return p


def project_tangent(surface, x, v):
    surface = as_surface(surface)
    v = np.asarray(v, dtype=float)
    if surface is Surface.EUCLIDEAN:
        out = np.array(v)
        out[..., 2] = 0.0
        return out
    # <x, x> = -1 on the hyperboloid, +1 on the sphere
    s = -1.0 if surface is Surface.HYPERBOLIC else 1.0
    return v - (s * inner(surface, x, v))[..., None] * x


def check_point(surface, p, tol=POINT_TOL):
    """Raise GeometryError unless ``p`` lies on the model surface."""
    surface = as_surface(surface)
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3 or not np.all(np.isfinite(p)):
        raise GeometryError("points must be finite 3-vectors")
    if surface is Surface.HYPERBOLIC:
        err = np.abs(inner(surface, p, p) + 1.0) / np.maximum(1.0, p[..., 0] ** 2)
        if np.any(p[..., 0] <= 0):
            raise GeometryError("hyperboloid point on the lower sheet")
    elif surface is Surface.SPHERICAL:
        err = np.abs(np.sum(p * p, axis=-1) - 1.0)
    else:
        err = np.abs(p[..., 2])
    if np.any(err > tol):
        raise GeometryError(f"point off the {surface.value} model surface (err {np.max(err):.2e})")


def check_tangent(surface, x, v, tol=_CHECK_TOL):
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    surface = as_surface(surface)
    if surface is Surface.EUCLIDEAN:
        err = np.abs(v[..., 2])
    else:
        scale = 1.0 + np.abs(x).max(axis=-1) * np.abs(v).max(axis=-1)
        err = np.abs(inner(surface, x, v)) / scale
    if np.any(err > tol):
        raise GeometryError(f"vector is not tangent at its base point (err {np.max(err):.2e})")


def frame_at(surface, x):
    """Oriented orthonormal frame ``(e1, e2)`` at ``x`` with ``e2 = j e1``."""
    surface = as_surface(surface)
    x = np.asarray(x, dtype=float)
    ref = np.broadcast_to(np.array([0.0, 1.0, 0.0]), x.shape)
    e1 = project_tangent(surface, x, ref)
    n1 = tangent_norm(surface, e1)
    alt = project_tangent(surface, x, np.broadcast_to(np.array([1.0, 0.0, 0.0]), x.shape))
    bad = n1 < 0.25
    e1 = np.where(bad[..., None], alt, e1)
    e1 = e1 / tangent_norm(surface, e1)[..., None]
    return e1, jrot(surface, x, e1)


# ---------------------------------------------------------------------------
# exp / log / distance

def _sinhc(n):
    n = np.asarray(n, dtype=float)
    small = n < 1e-4
    safe = np.where(small, 1.0, n)
    return np.where(small, 1.0 + n * n / 6.0 + n ** 4 / 120.0, np.sinh(safe) / safe)


def _sinc(n):
    return np.sinc(np.asarray(n, dtype=float) / np.pi)


def exp_map(surface, x, v, check=True):
    """Point at arc length ``|v|`` along the geodesic leaving ``x`` with velocity ``v``."""
    surface = as_surface(surface)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if check:
        check_tangent(surface, x, v)
    n = tangent_norm(surface, v)[..., None]
    if surface is Surface.HYPERBOLIC:
        p = np.cosh(n) * x + _sinhc(n) * v
    elif surface is Surface.SPHERICAL:
        if check and np.any(n >= np.pi):
            raise GeometryError("spherical exp_map needs |v| < pi")
        p = np.cos(n) * x + _sinc(n) * v
    else:
        p = x + v
    return project_point(surface, p)


def distance(surface, p, q):
    """Geodesic distance, computed with cancellation-free formulas."""
    surface = as_surface(surface)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    diff = p - q
    if surface is Surface.HYPERBOLIC:
        chord2 = np.maximum(inner(surface, diff, diff), 0.0)
        return 2.0 * np.arcsinh(0.5 * np.sqrt(chord2))
    if surface is Surface.SPHERICAL:
        return np.arctan2(np.linalg.norm(np.cross(p, q), axis=-1), np.sum(p * q, axis=-1))
    return np.linalg.norm(diff, axis=-1)


def log_map(surface, x, p):
    """Tangent vector at ``x`` with ``exp_map(x, log_map(x, p)) == p``."""
    surface = as_surface(surface)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    diff = p - x
    if surface is Surface.EUCLIDEAN:
        return diff
    d = distance(surface, x, p)[..., None]
    half_chord2 = 0.5 * inner(surface, diff, diff)[..., None]
    if surface is Surface.HYPERBOLIC:
        u = diff - half_chord2 * x
        return u / _sinhc(d)
    if np.any(d > np.pi - 1e-9):
        raise AntipodalError("log_map of an antipodal pair is not unique")
    u = diff + half_chord2 * x
    return u / _sinc(d)


def geodesic_midpoint(surface, p, q):
    surface = as_surface(surface)
    s = np.asarray(p, dtype=float) + np.asarray(q, dtype=float)
    if surface is Surface.HYPERBOLIC:
        return project_point(surface, s / np.sqrt(-inner(surface, s, s))[..., None])
    if surface is Surface.SPHERICAL:
        n = np.linalg.norm(s, axis=-1, keepdims=True)
        if np.any(n < 1e-12):
            raise AntipodalError("antipodal pair has no unique midpoint")
        return s / n
    return 0.5 * s


def rotate_tangent(surface, x, v, angle):
    """``e^{i angle} v`` in the tangent plane at ``x``."""
    angle = np.asarray(angle, dtype=float)[..., None]
    v = np.asarray(v, dtype=float)
    return np.cos(angle) * v + np.sin(angle) * jrot(surface, x, v)


def oriented_angle(surface, x, a, b):
    """Signed angle in (-pi, pi] from ``a`` to ``b`` in the tangent plane at ``x``."""
    return np.arctan2(area_form(surface, x, a, b), inner(surface, a, b))


def circle_circumference(r, surface):
    """Length of a geodesic circle of radius ``r``."""
    surface = as_surface(surface)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise GeometryError("radius must be positive")
    if surface is Surface.HYPERBOLIC:
        return 2 * np.pi * np.sinh(r)
    if surface is Surface.SPHERICAL:
        if np.any(r >= np.pi):
            raise GeometryError("spherical radius must be < pi")
        return 2 * np.pi * np.sin(r)
    return 2 * np.pi * r


# ---------------------------------------------------------------------------
# differentials

def unit_velocity(surface, x, v):
    """Unit velocity at ``exp(x, v)`` of the geodesic ``t -> exp(x, t v)``."""
    surface = as_surface(surface)
    n = tangent_norm(surface, v)[..., None]
    if np.any(n == 0):
        raise GeometryError("unit_velocity needs v != 0")
    vt = v / n
    if surface is Surface.HYPERBOLIC:
        w = np.sinh(n) * x + np.cosh(n) * vt
    elif surface is Surface.SPHERICAL:
        w = -np.sin(n) * x + np.cos(n) * vt
    else:
        w = vt
    return w


def jacobi_scale(surface, r):
    """Growth of a Jacobi field with J(0) = 1, J'(0) = 0 at arc length ``r``."""
    surface = as_surface(surface)
    if surface is Surface.HYPERBOLIC:
        return np.cosh(r)
    if surface is Surface.SPHERICAL:
        return np.cos(r)
    return np.ones_like(np.asarray(r, dtype=float))


def parallel_transport(surface, x, w, v):
    """Transport ``v`` from ``x`` along ``t -> exp(x, t w)``, ``t in [0, 1]``."""
    surface = as_surface(surface)
    v = np.asarray(v, dtype=float)
    if surface is Surface.EUCLIDEAN:
        return np.array(v)
    s = tangent_norm(surface, w)[..., None]
    u = np.where(s > 0, w / np.where(s > 0, s, 1.0), 0.0)
    c = inner(surface, u, v)[..., None]
    if surface is Surface.HYPERBOLIC:
        return v + c * ((np.cosh(s) - 1.0) * u + np.sinh(s) * x)
    return v + c * ((np.cos(s) - 1.0) * u - np.sin(s) * x)


def d_exp(surface, x, v, w):
    """Differential of ``exp`` at ``(x, v)`` applied to the horizontal lift of ``w``.

    ``w`` perturbs the base point while ``v`` is parallel transported.  The
    radial part of ``w`` maps to the geodesic velocity at ``p = exp(x, v)``;
    the orthogonal part follows the Jacobi field and is scaled by
    ``cosh|v|`` (hyperbolic), ``cos|v|`` (spherical) or 1 (flat).
    """
    surface = as_surface(surface)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    n = tangent_norm(surface, v)
    if np.any(n == 0):
        raise GeometryError("d_exp is taken at v != 0")
    vt = v / n[..., None]
    radial = inner(surface, w, vt)[..., None]
    ortho = inner(surface, w, jrot(surface, x, vt))[..., None]
    p = exp_map(surface, x, v, check=False)
    wp = unit_velocity(surface, x, v)
    return radial * wp + ortho * jacobi_scale(surface, n)[..., None] * jrot(surface, p, wp)


# ---------------------------------------------------------------------------
# sampling

def random_points(surface, n, rng, spread=1.0):
    """``n`` random points; hyperbolic/euclidean within ``spread`` of the origin."""
    surface = as_surface(surface)
    if surface is Surface.SPHERICAL:
        p = rng.normal(size=(n, 3))
        return p / np.linalg.norm(p, axis=1, keepdims=True)
    ang = rng.uniform(0, 2 * np.pi, n)
    rad = spread * np.sqrt(rng.uniform(0, 1, n))
    origin = np.array([1.0, 0.0, 0.0]) if surface is Surface.HYPERBOLIC else np.zeros(3)
    v = np.stack([np.zeros(n), rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    if surface is Surface.EUCLIDEAN:
        return np.stack([rad * np.cos(ang), rad * np.sin(ang), np.zeros(n)], axis=1)
    return exp_map(surface, np.broadcast_to(origin, v.shape), v)


def random_tangents(surface, x, rng, max_norm=1.0, min_norm=0.0):
    """Random tangent vectors at the points ``x`` with norms in [min_norm, max_norm]."""
    x = np.asarray(x, dtype=float)
    e1, e2 = frame_at(surface, x)
    m = x.shape[0]
    ang = rng.uniform(0, 2 * np.pi, m)[:, None]
    rad = rng.uniform(min_norm, max_norm, m)[:, None]
    return rad * (np.cos(ang) * e1 + np.sin(ang) * e2)
