"""Rectangles as a Hamiltonian motion on pairs of points.

For a pair ``(p, q)`` with midpoint ``x`` and ``p = exp(x, v)``,
``q = exp(x, -v)``, the time-``theta`` flow rotates the diameter by
``theta`` about ``x``:

    psi_theta(p, q) = (exp(x, e^{i theta} v), exp(x, -e^{i theta} v))

so ``(p, psi_theta(p, q)[0], q, psi_theta(p, q)[1])`` is a rectangle of
type ``theta``.  The rotation field is ``sin|v| (j w_p, j w_q)`` on the
sphere and ``sinh|v| (j w_p, j w_q)`` on the hyperbolic plane (unit
``w``), which equals ``J grad(H) / 2`` for ``H = -4 cos(d/2)`` resp.
``H = 4 cosh(d/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import AntipodalError, GeometryError
from .geometry import Surface
from .quad import CirclePair

ANTIPODAL_GUARD = 1e-9
_DIAGONAL = 1e-12


@dataclass(frozen=True)
class PairState:
    """A (possibly batched) pair of points on one surface."""

    surface: Surface
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "surface", geo.as_surface(self.surface))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))

    @property
    def distance(self):
        return geo.distance(self.surface, self.p, self.q)

    def swapped(self):
        return PairState(self.surface, self.q, self.p)

    def check(self):
        geo.check_point(self.surface, self.p, tol=1e-10)
        geo.check_point(self.surface, self.q, tol=1e-10)
        _check_antipodal(self.surface, self.distance)
        return self


def _check_antipodal(surface, d):
    if surface is Surface.SPHERICAL and np.any(d >= np.pi - ANTIPODAL_GUARD):
        raise AntipodalError("pair is (nearly) antipodal; the Hamiltonian is singular there")


def hamiltonian(s: PairState):
    """``-4 cos(d/2)`` on the sphere, ``4 cosh(d/2)`` on the hyperbolic plane."""
    d = s.distance
    _check_antipodal(s.surface, d)
    if s.surface is Surface.SPHERICAL:
        return -4.0 * np.cos(0.5 * d)
    if s.surface is Surface.HYPERBOLIC:
        return 4.0 * np.cosh(0.5 * d)
    raise GeometryError("no Hamiltonian is defined for the flat plane")


def hamiltonian_chordal(z, w):
    """Spherical Hamiltonian from the chord length in R^3."""
    diff = np.asarray(z, dtype=float) - np.asarray(w, dtype=float)
    return -4.0 * np.sqrt(1.0 - 0.25 * np.sum(diff * diff, axis=-1))


def hamiltonian_gradient(s: PairState):
    """``dH/dd * grad d`` as a pair of tangent vectors at ``(p, q)``."""
    d = s.distance
    if np.any(d < _DIAGONAL):
        raise GeometryError("gradient of H is taken off the diagonal")
    if s.surface is Surface.SPHERICAL:
        dh = 2.0 * np.sin(0.5 * d)
    elif s.surface is Surface.HYPERBOLIC:
        dh = 2.0 * np.sinh(0.5 * d)
    else:
        raise GeometryError("no Hamiltonian is defined for the flat plane")
    # grad_p d is the unit vector at p pointing away from q
    gp = -geo.log_map(s.surface, s.p, s.q) / d[..., None]
    gq = -geo.log_map(s.surface, s.q, s.p) / d[..., None]
    return dh[..., None] * gp, dh[..., None] * gq


def midpoint_axis(s: PairState) -> CirclePair:
    """``(x, v)`` with ``x`` the midpoint, ``p = exp(x, v)``, ``q = exp(x, -v)``."""
    _check_antipodal(s.surface, s.distance)
    x = geo.geodesic_midpoint(s.surface, s.p, s.q)
    return CirclePair(s.surface, x, geo.log_map(s.surface, x, s.p))


def flow_closed_form(s: PairState, theta) -> PairState:
    """Rotate the diameter ``pq`` by ``theta`` about its midpoint."""
    cp = midpoint_axis(s)
    v = geo.rotate_tangent(s.surface, cp.center, cp.radial, theta)
    p = geo.exp_map(s.surface, cp.center, v, check=False)
    q = geo.exp_map(s.surface, cp.center, -v, check=False)
    diag = (s.distance < _DIAGONAL)[..., None]
    return PairState(s.surface, np.where(diag, s.p, p), np.where(diag, s.q, q))


def flow_field(surface, p, q):
    """Velocity of the rectangle flow at ``(p, q)``; zero on the diagonal."""
    surface = geo.as_surface(surface)
    x = geo.geodesic_midpoint(surface, p, q)
    v = geo.log_map(surface, x, p)
    r = geo.tangent_norm(surface, v)
    diag = r < _DIAGONAL
    vs = np.where(diag[..., None], geo.frame_at(surface, x)[0], v)
    wp = geo.unit_velocity(surface, x, vs)
    wq = geo.unit_velocity(surface, x, -vs)
    if surface is Surface.SPHERICAL:
        speed = np.sin(r)
    elif surface is Surface.HYPERBOLIC:
        speed = np.sinh(r)
    else:
        speed = r
    speed = np.where(diag, 0.0, speed)[..., None]
    return speed * geo.jrot(surface, p, wp), speed * geo.jrot(surface, q, wq)


def flow_ode(s: PairState, theta, step=1e-3) -> PairState:
    """Integrate the rectangle flow with fixed-step RK4, projecting every step.

    Off-surface stage points are projected before the field is evaluated,
    which is a smooth extension of the field and keeps fourth order.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    surface = s.surface
    d0 = s.distance
    _check_antipodal(surface, d0)
    n = max(1, int(np.ceil(abs(theta) / step)))
    h = theta / n
    y = np.stack([s.p, s.q], axis=-2)

    def f(y):
        y = geo.project_point(surface, y)
        a, b = flow_field(surface, y[..., 0, :], y[..., 1, :])
        return np.stack([a, b], axis=-2)

    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = geo.project_point(surface, y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
    out = PairState(surface, y[..., 0, :], y[..., 1, :])
    _check_antipodal(surface, out.distance)
    return out


def rectangle_from_flow(surface, p1, p3, theta):
    """``(p2, p4)`` making ``(p1, p2, p3, p4)`` a rectangle of type ``theta``."""
    s = PairState(surface, p1, p3)
    if np.any(s.distance < _DIAGONAL):
        raise GeometryError("rectangle_from_flow needs p1 != p3")
    out = flow_closed_form(s, theta)
    return out.p, out.q
