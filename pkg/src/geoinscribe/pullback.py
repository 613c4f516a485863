"""Matrix form of the quadrilateral map's differential and its pullback of diagonal forms.

In the bases ``<w_p, cosh|v| j w_p, w_q, cosh|v| j w_q>`` (and the primed
analogue) the differential of ``quad_map`` is the constant matrix
``N = M A^{-1}``.  With ``J_a = diag(a J, J)`` the congruence ``N^T J_a N``
is block diagonal ``diag(b J, c J)``; here that is checked numerically, both
on the matrices and geometrically with finite differences on the
hyperboloid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .geometry import Surface
from .quad import (AngleTriple, apply_complex, di_across_diagonal, di_finite_difference,
                   diagonal_multipliers, f_phi_inverse, quad_map, random_triples)

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
BLOCK_TOL = 1e-9
GEOMETRIC_TOL = 1e-4


def rotation_mat(phi, dtype=float):
    phi = dtype(phi)
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]], dtype=dtype)


def build_A(phi1, dtype=float):
    eye = np.eye(2, dtype=dtype)
    return np.block([[eye, eye], [eye, rotation_mat(phi1, dtype)]])


def build_M(phi2, theta, dtype=float):
    eye = np.eye(2, dtype=dtype)
    return np.block([[eye, rotation_mat(theta, dtype)],
                     [eye, rotation_mat(dtype(theta) + dtype(phi2), dtype)]])


def _inverse_A(phi1, dtype):
    """Closed-form ``A^{-1}`` via ``B = (r_phi - I)^{-1}``: ``[[I + B, -B], [-B, B]]``."""
    phi1 = dtype(phi1)
    c, s = np.cos(phi1), np.sin(phi1)
    B = np.array([[c - 1, -s], [s, c - 1]], dtype=dtype) / (2 - 2 * c)
    eye = np.eye(2, dtype=dtype)
    return np.block([[eye + B, -B], [-B, B]])


def build_N(t: AngleTriple, dtype=float):
    """Matrix of the differential of ``quad_map`` in the adapted bases."""
    return build_M(t.phi2, t.theta, dtype) @ _inverse_A(t.phi1, dtype)


def compute_a(t: AngleTriple, dtype=float):
    th, p1, p2 = dtype(t.theta), dtype(t.phi1), dtype(t.phi2)
    half = dtype(0.5)
    num = np.sin(half * (p2 + th)) * np.sin(half * (p2 + th - p1))
    den = np.sin(half * th) * np.sin(half * (p1 - th))
    return num / den if dtype is not float else float(num / den)


@dataclass(frozen=True)
class PullbackConstants:
    a: float
    b: float
    c: float
    residual: float

    @property
    def ok(self):
        return self.residual < BLOCK_TOL and min(abs(self.a), abs(self.b), abs(self.c)) > 1e-12


def pullback_matrix(t: AngleTriple, a=None, dtype=float):
    """``K = N^T J_a N``."""
    a = compute_a(t, dtype) if a is None else dtype(a)
    Ja = np.zeros((4, 4), dtype=dtype)
    Ja[:2, :2] = a * J
    Ja[2:, 2:] = J
    N = build_N(t, dtype)
    return N.T @ Ja @ N


def compute_constants(t: AngleTriple) -> PullbackConstants:
    """``a``, ``b = K[0, 1]``, ``c = K[2, 3]`` and the deviation of ``K`` from block form.

    ``K`` is evaluated in extended precision: for nearly degenerate triples
    its entries reach ~1e6, and double rounding alone would then exceed the
    1e-9 block tolerance.
    """
    ext = np.longdouble
    a = compute_a(t, ext)
    K = pullback_matrix(t, a, ext)
    b, c = K[0, 1], K[2, 3]
    block = np.zeros((4, 4), dtype=ext)
    block[:2, :2] = b * J
    block[2:, 2:] = c * J
    return PullbackConstants(float(a), float(b), float(c), float(np.abs(K - block).max()))


# ---------------------------------------------------------------------------
# geometric check on the hyperboloid

@dataclass
class PullbackReport:
    triple: AngleTriple
    constants: PullbackConstants
    trials: int
    errors: np.ndarray = field(repr=False)
    tol: float = GEOMETRIC_TOL

    @property
    def max_rel_error(self):
        return float(self.errors.max()) if self.errors.size else 0.0

    @property
    def passed(self):
        return self.max_rel_error < self.tol


def _random_pairs(rng, n, spread=1.0, min_sep=0.2):
    s = Surface.HYPERBOLIC
    p = np.empty((0, 3))
    q = np.empty((0, 3))
    while len(p) < n:
        a = geo.random_points(s, 2 * n, rng, spread)
        b = geo.random_points(s, 2 * n, rng, spread)
        keep = geo.distance(s, a, b) > min_sep
        p = np.concatenate([p, a[keep]])
        q = np.concatenate([q, b[keep]])
    return p[:n], q[:n]


def two_form_terms(p, q, u, w, t: AngleTriple, step=1e-5, consts=None):
    """Left and right sides of ``I^* (a w1 + w2) = b w1 + c w2`` on ``(u, w)``.

    ``u`` and ``w`` are pairs ``(u_p, u_q)`` of tangent vectors at ``(p, q)``.
    """
    s = Surface.HYPERBOLIC
    consts = compute_constants(t) if consts is None else consts
    p2, p4 = quad_map(s, p, q, t)
    du = di_finite_difference(s, p, q, u[0], u[1], t, step)
    dw = di_finite_difference(s, p, q, w[0], w[1], t, step)
    lhs = (consts.a * geo.area_form(s, p2, du[0], dw[0])
           + geo.area_form(s, p4, du[1], dw[1]))
    rhs_1 = consts.b * geo.area_form(s, p, u[0], w[0])
    rhs_2 = consts.c * geo.area_form(s, q, u[1], w[1])
    return lhs, rhs_1 + rhs_2, np.abs(rhs_1) + np.abs(rhs_2)


def verify_pullback_geometric(t: AngleTriple, trials=100, seed=0, step=1e-5,
                              spread=1.0) -> PullbackReport:
    """Compare both sides of the pullback identity at random states.

    The differential of ``quad_map`` comes from central differences, so the
    relative error (normalised by ``|b w1| + |c w2|``) is limited to roughly
    ``1e-6``; the pass threshold is ``1e-4``.
    """
    consts = compute_constants(t)
    if trials <= 0:
        return PullbackReport(t, consts, 0, np.zeros(0))
    rng = np.random.default_rng(seed)
    s = Surface.HYPERBOLIC
    p, q = _random_pairs(rng, trials, spread)
    u = (geo.random_tangents(s, p, rng, 1.0, 0.2), geo.random_tangents(s, q, rng, 1.0, 0.2))
    w = (geo.random_tangents(s, p, rng, 1.0, 0.2), geo.random_tangents(s, q, rng, 1.0, 0.2))
    lhs, rhs, scale = two_form_terms(p, q, u, w, t, step, consts=consts)
    errors = np.abs(lhs - rhs) / np.maximum(scale, 1e-300)
    return PullbackReport(t, consts, trials, errors)


def di_matrix_fd(p, q, t: AngleTriple, step=1e-5):
    """Finite-difference matrix of ``DI`` in the adapted bases at one pair."""
    s = Surface.HYPERBOLIC
    cp = f_phi_inverse(s, p, q, t.phi1)
    x, v = cp.center, cp.radial
    r = float(geo.tangent_norm(s, v))
    ch = np.cosh(r)

    def basis(angle):
        va = geo.rotate_tangent(s, x, v, angle)
        w = geo.unit_velocity(s, x, va)
        pt = geo.exp_map(s, x, va, check=False)
        return w, geo.jrot(s, pt, w)

    wp, jwp = basis(0.0)
    wq, jwq = basis(t.phi1)
    wp2, jwp2 = basis(t.theta)
    wq2, jwq2 = basis(t.theta + t.phi2)
    zero = np.zeros(3)
    cols = [(wp, zero), (ch * jwp, zero), (zero, wq), (zero, ch * jwq)]
    N = np.empty((4, 4))
    for k, (up, uq) in enumerate(cols):
        d2, d4 = di_finite_difference(s, p, q, up, uq, t, step)
        N[:, k] = [geo.inner(s, d2, wp2), geo.inner(s, d2, jwp2) / ch,
                   geo.inner(s, d4, wq2), geo.inner(s, d4, jwq2) / ch]
    return N


# ---------------------------------------------------------------------------
# behaviour across the diagonal

@dataclass
class DiagonalReport:
    surface: Surface
    errors: np.ndarray = field(repr=False)
    tol: float = 1e-6

    @property
    def max_error(self):
        return float(self.errors.max()) if self.errors.size else 0.0

    @property
    def passed(self):
        return self.max_error < self.tol


def diagonal_errors(surface, x, w, t: AngleTriple, step=3e-6):
    """``|DI(w, -w) - (m1 w, m2 w)| / |w|`` with ``m1, m2`` the diagonal multipliers."""
    d2, d4 = di_across_diagonal(surface, x, w, t, step)
    m1, m2 = diagonal_multipliers(t.theta, t.phi1, t.phi2)
    e2 = geo.tangent_norm(surface, d2 - apply_complex(surface, x, w, m1))
    e4 = geo.tangent_norm(surface, d4 - apply_complex(surface, x, w, m2))
    return np.maximum(e2, e4) / geo.tangent_norm(surface, w)


def verify_diagonal(surface=Surface.HYPERBOLIC, trials=100, seed=0, triple=None,
                    step=3e-6) -> DiagonalReport:
    """Random diagonal points, directions and (unless given) triples."""
    s = geo.as_surface(surface)
    rng = np.random.default_rng(seed)
    triples = [triple] * trials if triple is not None else random_triples(trials, rng)
    x = geo.random_points(s, trials, rng, 1.0)
    w = geo.random_tangents(s, x, rng, 1.0, 0.3)
    errors = np.array([float(diagonal_errors(s, x[k], w[k], t, step))
                       for k, t in enumerate(triples)])
    return DiagonalReport(s, errors)
