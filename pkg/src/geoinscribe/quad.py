"""Quadrilateral maps on pairs of points.

``f_phi`` sends a circle datum ``(x, v)`` to the pair
``(exp(x, v), exp(x, e^{i phi} v))``; ``quad_map`` is the composite
``f_phi2 . R_theta . f_phi1^{-1}`` which sends two vertices ``(p1, p3)`` of a
cyclic quadrilateral of type ``(theta, phi1, phi2)`` to the other two
``(p2, p4)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import DiagonalError, GeometryError
from .geometry import Surface

TWO_PI = 2.0 * np.pi
NEAR_DIAGONAL = 1e-8
ANGLE_TOL = 1e-11


@dataclass(frozen=True)
class AngleTriple:
    """Type ``(theta, phi1, phi2)`` of a cyclic quadrilateral, in radians.

    Valid triples satisfy ``0 < theta < phi1 <= pi`` and
    ``phi1 < phi2 + theta < 2 pi``.
    """

    theta: float
    phi1: float
    phi2: float

    def __post_init__(self):
        t, p1, p2 = float(self.theta), float(self.phi1), float(self.phi2)
        if not all(np.isfinite([t, p1, p2])):
            raise GeometryError("angles must be finite")
        if not (0 < t < p1 <= np.pi and p1 < p2 + t < TWO_PI):
            raise GeometryError(
                f"invalid angle triple ({t}, {p1}, {p2}): need 0 < theta < phi1 <= pi "
                "and phi1 < phi2 + theta < 2 pi")

    @classmethod
    def rectangle(cls, theta):
        return cls(theta, np.pi, np.pi)

    @property
    def vertex_angles(self):
        """Angles of the four vertices measured from the first one."""
        return np.array([0.0, self.theta, self.phi1, self.phi2 + self.theta])

    def as_tuple(self):
        return (float(self.theta), float(self.phi1), float(self.phi2))


def random_triples(n, rng):
    """Uniform samples from the valid region (rejection from a bounding box)."""
    out = []
    while len(out) < n:
        m = 4 * (n - len(out)) + 16
        t = rng.uniform(0, np.pi, m)
        p1 = rng.uniform(0, np.pi, m)
        p2 = rng.uniform(0, TWO_PI, m)
        ok = (0 < t) & (t < p1) & (p1 < p2 + t) & (p2 + t < TWO_PI)
        out.extend(AngleTriple(*row) for row in np.stack([t, p1, p2], 1)[ok])
    return out[:n]


@dataclass(frozen=True)
class CirclePair:
    """Center ``x`` and radial vector ``v`` of a geodesic circle (possibly batched)."""

    surface: Surface
    center: np.ndarray
    radial: np.ndarray

    @property
    def radius(self):
        return geo.tangent_norm(self.surface, self.radial)

    def point_at(self, angle):
        """``exp(x, e^{i angle} v)``."""
        v = geo.rotate_tangent(self.surface, self.center, self.radial, angle)
        return geo.exp_map(self.surface, self.center, v, check=False)

    def validate(self):
        geo.check_point(self.surface, self.center, tol=1e-10)
        geo.check_tangent(self.surface, self.center, self.radial)
        r = self.radius
        if np.any(r <= 0):
            raise GeometryError("circle radius must be positive")
        if self.surface is Surface.SPHERICAL and np.any(r >= np.pi / 2):
            raise GeometryError("spherical circles need radius < pi/2")
        return self


def _check_phi(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any((phi <= 0) | (phi >= TWO_PI)):
        raise GeometryError("phi must lie in (0, 2 pi)")
    return phi


def f_phi(cp: CirclePair, phi):
    """``(exp(x, v), exp(x, e^{i phi} v))``."""
    phi = _check_phi(phi)
    return cp.point_at(0.0), cp.point_at(phi)


def _angle_residual(surface, x, p, q, phi):
    a = geo.log_map(surface, x, p)
    b = geo.log_map(surface, x, q)
    ang = np.mod(geo.oriented_angle(surface, x, a, b), TWO_PI)
    return np.mod(ang - phi + np.pi, TWO_PI) - np.pi


def f_phi_inverse(surface, p, q, phi) -> CirclePair:
    """The unique circle datum ``(x, v)`` with ``f_phi(x, v) == (p, q)``.

    The radius comes from the isosceles triangle ``x p q`` (apex angle
    ``phi``); the center sits on the perpendicular bisector of ``pq`` at a
    signed offset whose sign selects the side giving the counterclockwise
    angle ``+phi`` from ``p`` to ``q``.  A short secant refinement on that
    offset polishes the oriented-angle residual.
    """
    surface = geo.as_surface(surface)
    phi = _check_phi(phi)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = geo.distance(surface, p, q)
    if np.any(d <= 0):
        raise DiagonalError("f_phi_inverse needs p != q")
    if surface is Surface.SPHERICAL and np.any(d >= np.pi - 1e-12):
        raise geo.AntipodalError("antipodal pair")
    half = 0.5 * d
    sh = np.sin(0.5 * phi)
    ch = np.cos(0.5 * phi)
    if surface is Surface.HYPERBOLIC:
        r = np.arcsinh(np.sinh(half) / sh)
        h = np.arctanh(np.tanh(r) * ch)
    elif surface is Surface.SPHERICAL:
        s = np.sin(half) / sh
        if np.any(s >= 1.0):
            raise GeometryError("no spherical circle of radius < pi/2 subtends this pair")
        r = np.arcsin(s)
        h = np.arctan(np.tan(r) * ch)
    else:
        r = half / sh
        h = r * ch

    m = geo.geodesic_midpoint(surface, p, q)
    t = geo.log_map(surface, m, q)
    t = t / geo.tangent_norm(surface, t)[..., None]
    side = geo.jrot(surface, m, t)

    def center(offset):
        return geo.exp_map(surface, m, offset[..., None] * side, check=False)

    x = center(h)
    res = _angle_residual(surface, x, p, q, phi)
    # the offset -> angle map is decreasing; a few secant steps where needed
    for _ in range(8):
        bad = np.abs(res) > ANGLE_TOL
        if not np.any(bad):
            break
        dh = np.where(bad, 1e-7 * (1.0 + np.abs(h)), 0.0)
        res2 = _angle_residual(surface, center(h + dh), p, q, phi)
        slope = np.where(bad, (res2 - res) / np.where(dh == 0, 1.0, dh), 1.0)
        slope = np.where(np.abs(slope) < 1e-14, -1.0, slope)
        h = np.where(bad, h - res / slope, h)
        x = center(h)
        res = _angle_residual(surface, x, p, q, phi)
    v = geo.log_map(surface, x, p)
    return CirclePair(surface, x, v)


def quad_map(surface, p, q, triple: AngleTriple, return_circle=False):
    """``(p2, p4)`` completing ``(p1, p3) = (p, q)`` to a quadrilateral of ``triple``."""
    surface = geo.as_surface(surface)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(geo.distance(surface, p, q) < NEAR_DIAGONAL):
        raise DiagonalError("quad_map is undefined this close to the diagonal")
    cp = f_phi_inverse(surface, p, q, triple.phi1)
    v = geo.rotate_tangent(surface, cp.center, cp.radial, triple.theta)
    rotated = CirclePair(surface, cp.center, v)
    p2, p4 = f_phi(rotated, triple.phi2)
    if return_circle:
        return p2, p4, cp
    return p2, p4


def quad_vertices(cp: CirclePair, triple: AngleTriple):
    """The four vertices ``(p1, p2, p3, p4)`` stacked on axis -2."""
    return np.stack([cp.point_at(a) for a in triple.vertex_angles], axis=-2)


def vertex_angles(cp: CirclePair, points):
    """Counterclockwise angles in [0, 2 pi) at the center from ``v`` to each point."""
    s = cp.surface
    x = np.asarray(cp.center)[..., None, :]
    v = np.asarray(cp.radial)[..., None, :]
    logs = geo.log_map(s, np.broadcast_to(x, np.shape(points)), points)
    return np.mod(geo.oriented_angle(s, np.broadcast_to(x, logs.shape),
                                     np.broadcast_to(v, logs.shape), logs), TWO_PI)


def diagonal_multipliers(theta, phi1, phi2):
    """Complex factors by which ``DI`` acts on ``(w, -w)`` at a diagonal point."""
    e1 = np.exp(1j * phi1)
    if abs(e1 - 1.0) < 1e-14:
        raise GeometryError("phi1 must not be a multiple of 2 pi")
    den = e1 - 1.0
    return ((1 + e1 - 2 * np.exp(1j * theta)) / den,
            (1 + e1 - 2 * np.exp(1j * (theta + phi2))) / den)


def apply_complex(surface, x, w, z):
    """Multiply the tangent vector ``w`` at ``x`` by the complex number ``z``."""
    z = np.asarray(z)
    return np.real(z)[..., None] * w + np.imag(z)[..., None] * geo.jrot(surface, x, w)


def di_finite_difference(surface, p, q, up, uq, triple: AngleTriple, step=1e-5):
    """Central-difference ``DI(up, uq)``; returns tangent vectors at ``(p2, p4)``."""
    surface = geo.as_surface(surface)
    p_plus = geo.exp_map(surface, p, step * np.asarray(up), check=False)
    q_plus = geo.exp_map(surface, q, step * np.asarray(uq), check=False)
    p_minus = geo.exp_map(surface, p, -step * np.asarray(up), check=False)
    q_minus = geo.exp_map(surface, q, -step * np.asarray(uq), check=False)
    a2, a4 = quad_map(surface, p_plus, q_plus, triple)
    b2, b4 = quad_map(surface, p_minus, q_minus, triple)
    c2, c4 = quad_map(surface, p, q, triple)
    d2 = geo.project_tangent(surface, c2, (a2 - b2) / (2 * step))
    d4 = geo.project_tangent(surface, c4, (a4 - b4) / (2 * step))
    return d2, d4


def di_across_diagonal(surface, x, w, triple: AngleTriple, step=3e-6):
    """Central difference of ``quad_map`` along ``(w, -w)`` through the diagonal point ``(x, x)``.

    The map is undefined on the diagonal itself, but it extends smoothly, so
    the pairs ``(exp(x, +h w), exp(x, -h w))`` and their swaps straddle it.
    """
    surface = geo.as_surface(surface)
    hw = step * np.asarray(w, dtype=float)
    a = geo.exp_map(surface, x, hw, check=False)
    b = geo.exp_map(surface, x, -hw, check=False)
    a2, a4 = quad_map(surface, a, b, triple)
    b2, b4 = quad_map(surface, b, a, triple)
    return (geo.project_tangent(surface, x, (a2 - b2) / (2 * step)),
            geo.project_tangent(surface, x, (a4 - b4) / (2 * step)))
