"""Exhaustive oracle for inscriptions, independent of the grid/Newton pipeline.

The oracle shares only the curve definition (``SampledCurve.__call__``) and
basic surface primitives with the engine.  It builds the missing vertices
with its own construction: the circle center is found by bisection along
the perpendicular bisector of ``p1 p3`` on the subtended angle, and the
vertices come from rotating ``p1`` and ``p3`` about that center.  Distances
to the curve come from a dense polyline, golden-section minimisation, and a
normal offset near the curve.  Roots are localised by quadtree bisection on
sign changes.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from . import charts
from . import geometry as geo
from .curve import SampledCurve, circular_gap
from .engine import BAND, DEDUP_TOL, Inscription
from .geometry import Surface
from .quad import AngleTriple, CirclePair

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_TWO_PI = 2.0 * np.pi


def rotate_about(surface, x, y, alpha):
    """Rotation by ``alpha`` about the point ``x``, applied to points ``y``."""
    surface = geo.as_surface(surface)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ca = np.cos(alpha)[..., None]
    sa = np.sin(alpha)[..., None]
    if surface is Surface.EUCLIDEAN:
        d = y - x
        out = np.stack([d[..., 0] * ca[..., 0] - d[..., 1] * sa[..., 0],
                        d[..., 0] * sa[..., 0] + d[..., 1] * ca[..., 0],
                        np.zeros(d.shape[:-1])], axis=-1)
        return x + out
    if surface is Surface.SPHERICAL:
        # Rodrigues with axis x
        along = np.sum(x * y, axis=-1)[..., None] * x
        return along + ca * (y - along) + sa * np.cross(x, y)
    eta = np.array([-1.0, 1.0, 1.0])
    c = -np.sum(x * y * eta, axis=-1)[..., None]
    perp = y - c * x
    return c * x + ca * perp + sa * np.cross(x, perp) * eta


class _Construction:
    """Vertices ``p2, p4`` and circle center from ``p1, p3`` by bisection."""

    def __init__(self, surface, triple: AngleTriple, flow=False):
        self.surface = geo.as_surface(surface)
        self.triple = triple
        self.flow = flow

    def _bracket(self, d):
        if self.surface is Surface.SPHERICAL:
            return np.full(d.shape, -0.5 * np.pi + 1e-12), np.full(d.shape, 0.5 * np.pi - 1e-12)
        # generous bound on the offset, keeps the far end numerically sane
        phi = self.triple.phi1
        half = np.tan(0.5 * min(phi, _TWO_PI - phi))
        if self.surface is Surface.HYPERBOLIC:
            h = np.arcsinh(2.0 * np.tanh(0.5 * d) / half) + 1.0
        else:
            h = d / half + 1.0
        return -h, h

    def center(self, p, q):
        s = self.surface
        m = geo.geodesic_midpoint(s, p, q)
        if self.flow:
            return m
        u = geo.log_map(s, m, q)
        u = u / geo.tangent_norm(s, u)[..., None]
        nrm = geo.jrot(s, m, u)
        target = self.triple.phi1
        lo, hi = self._bracket(geo.distance(s, p, q))
        # the counterclockwise angle p -> q seen from the center decreases along +nrm
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            x = geo.exp_map(s, m, mid[..., None] * nrm, check=False)
            a = geo.log_map(s, x, p)
            b = geo.log_map(s, x, q)
            ang = np.mod(np.arctan2(geo.area_form(s, x, a, b), geo.inner(s, a, b)), _TWO_PI)
            above = ang > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return geo.exp_map(s, m, (0.5 * (lo + hi))[..., None] * nrm, check=False)

    def admissible(self, p, q):
        d = geo.distance(self.surface, p, q)
        ok = d > 1e-8
        if self.surface is Surface.SPHERICAL:
            # radius below pi/2 forces d < 2 asin(sin(phi1 / 2))
            half = np.pi / 2 if self.flow else 0.5 * self.triple.phi1
            limit = 2 * np.arcsin(min(np.sin(half), 1.0)) - 1e-9
            ok &= d < limit
        return ok

    def __call__(self, p, q):
        t = self.triple
        x = self.center(p, q)
        p2 = rotate_about(self.surface, x, p, np.full(p.shape[:-1], t.theta))
        p4 = rotate_about(self.surface, x, q, np.full(p.shape[:-1], t.theta + t.phi2 - t.phi1))
        return p2, p4, x


class _CurveDistance:
    """Signed distance to the curve via a dense polyline and golden-section search."""

    def __init__(self, sc: SampledCurve, density=4):
        self.sc = sc
        m = density * len(sc)
        self.u = np.arange(m) / m
        self.h = 1.0 / m
        dense = sc(self.u)
        self.chart = self._chart(dense)
        self.tree = cKDTree(self.chart)

    def _chart(self, pts):
        s = self.sc.surface
        if s is Surface.HYPERBOLIC:
            return charts.hyperboloid_to_disk(pts)
        return pts

    def coarse(self, X):
        _, idx = self.tree.query(self._chart(X.reshape(-1, 3)))
        u = self.u[idx]
        return u.reshape(X.shape[:-1])

    def _dist(self, X, u):
        return geo.distance(self.sc.surface, self.sc(u), X)

    def __call__(self, X, precise=True):
        s = self.sc.surface
        u0 = self.coarse(X)
        if precise:
            a = u0 - 2 * self.h
            b = u0 + 2 * self.h
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            fc = self._dist(X, c)
            fd = self._dist(X, d)
            for _ in range(60):
                left = fc < fd
                b = np.where(left, d, b)
                a = np.where(left, a, c)
                d_new = np.where(left, c, a + _GOLDEN * (b - a))
                c_new = np.where(left, b - _GOLDEN * (b - a), d)
                f_new = self._dist(X, np.where(left, c_new, d_new))
                fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
                c, d = c_new, d_new
            u = np.mod(0.5 * (a + b), 1.0)
        else:
            u = u0
        foot = self.sc(u)
        tang = self.sc.tangent(u)
        tang = tang / geo.tangent_norm(s, tang)[..., None]
        off = X - foot
        side = geo.area_form(s, foot, tang, off)
        dist = geo.distance(s, foot, X)
        signed = np.where(side < 0, -dist, dist)
        # normal offset is insensitive to foot-point error along the curve
        near = np.abs(dist) < 1e-4
        signed = np.where(near, side, signed)
        return signed, u


class _OracleResidual:
    def __init__(self, sc, construction, distance):
        self.sc = sc
        self.cons = construction
        self.dist = distance

    def __call__(self, s, t, precise=True, full=False):
        s = np.asarray(s, dtype=float).ravel()
        t = np.asarray(t, dtype=float).ravel()
        out = np.full((len(s), 2), np.nan)
        feet = np.full((len(s), 2), np.nan)
        centers = np.full((len(s), 3), np.nan)
        P = self.sc(s)
        Q = self.sc(t)
        ok = (circular_gap(s, t) > BAND) & self.cons.admissible(P, Q)
        idx = np.nonzero(ok)[0]
        if len(idx):
            p2, p4, x = self.cons(P[idx], Q[idx])
            r, u = self.dist(np.stack([p2, p4], axis=1), precise)
            out[idx] = r
            feet[idx] = u
            centers[idx] = x
        if full:
            return out, feet, centers
        return out


def _sign_change(vals):
    """``vals`` has shape (..., corners, 2); True where both components straddle 0."""
    finite = np.all(np.isfinite(vals), axis=(-2, -1))
    with np.errstate(invalid="ignore"):
        both = np.all((vals.max(axis=-2) > 0) & (vals.min(axis=-2) < 0), axis=-1)
    return finite & both


def _quadtree(res, boxes, depth=34, keep=16):
    """Shrink boxes ``(s0, t0, size)`` onto common zeros by 4-way subdivision.

    All boxes advance together; each keeps at most ``keep`` live children,
    those with the smallest residual at their centre.
    """
    if not boxes:
        return []
    live = np.hstack([np.asarray(boxes, dtype=float), np.arange(len(boxes))[:, None]])
    for _ in range(depth):
        half = live[:, 2:3] / 2
        kids = np.concatenate([
            np.hstack([live[:, :1] + ds * half, live[:, 1:2] + dt * half, half, live[:, 3:]])
            for ds in (0, 1) for dt in (0, 1)])
        s0, t0, h = kids[:, 0], kids[:, 1], kids[:, 2]
        cs = np.stack([s0, s0 + h, s0, s0 + h, s0 + h / 2], axis=1)
        ct = np.stack([t0, t0, t0 + h, t0 + h, t0 + h / 2], axis=1)
        vals = res(cs.ravel(), ct.ravel()).reshape(len(kids), 5, 2)
        alive = _sign_change(vals[:, :4])
        kids = kids[alive]
        if not len(kids):
            return []
        centre = np.max(np.abs(vals[alive, 4]), axis=-1)
        centre = np.where(np.isfinite(centre), centre, np.inf)
        order = np.lexsort((centre, kids[:, 3]))
        kids = kids[order]
        first = np.searchsorted(kids[:, 3], kids[:, 3], side="left")
        live = kids[np.arange(len(kids)) - first < keep]
    ids, first = np.unique(live[:, 3], return_index=True)
    best = live[first]
    return [b[:2] + b[2] / 2 for b in best]


def brute_force_oracle(sc: SampledCurve, triple: AngleTriple, n=256, flow=False,
                       threshold=None, max_candidates=None):
    """All inscriptions visible at resolution ``n``, by exhaustive search.

    Every off-diagonal pair of the ``n`` equally spaced parameters is
    evaluated.  Cells whose corners change sign in both residual components,
    and local minima of the residual below ``3 x`` the sample spacing, are
    localised by quadtree bisection; survivors with residual below ``1e-8``
    are returned, deduplicated.  ``flow=True`` builds the rectangle from the
    midpoint axis instead of the circle of angle ``phi1``.  ``max_candidates``
    keeps only the cells with the smallest coarse residual (useful when the
    solutions form a continuous family).
    """
    if n < 256:
        raise ValueError("brute_force_oracle needs n >= 256")
    cons = _Construction(sc.surface, triple, flow=flow)
    dist = _CurveDistance(sc)
    res = _OracleResidual(sc, cons, dist)
    threshold = 3 * sc.spacing if threshold is None else threshold

    g = np.arange(n) / n
    S, T = np.meshgrid(g, g, indexing="ij")
    vals = np.full((n * n, 2), np.nan)
    fs, ft = S.ravel(), T.ravel()
    for start in range(0, n * n, 16384):
        sl = slice(start, start + 16384)
        vals[sl] = res(fs[sl], ft[sl], precise=False)
    vals = vals.reshape(n, n, 2)

    corners = np.stack([vals, np.roll(vals, -1, 0), np.roll(vals, -1, 1),
                        np.roll(np.roll(vals, -1, 0), -1, 1)], axis=2)
    change = _sign_change(corners)
    norm = np.max(np.abs(vals), axis=-1)
    norm = np.where(np.isfinite(norm), norm, np.inf)
    boxes = [(i / n, j / n, 1.0 / n) for i, j in zip(*np.nonzero(change))]
    scores = [norm[i, j] for i, j in zip(*np.nonzero(change))]

    is_min = norm < threshold
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= norm <= np.roll(np.roll(norm, di, 0), dj, 1)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    is_min &= np.minimum(gap, n - gap) >= 3
    boxes += [((i - 1) / n, (j - 1) / n, 2.0 / n) for i, j in zip(*np.nonzero(is_min))]
    scores += [norm[i, j] for i, j in zip(*np.nonzero(is_min))]
    if max_candidates is not None:
        order = np.argsort(scores, kind="stable")[:max_candidates]
        boxes = [boxes[k] for k in order]

    roots = _quadtree(res, boxes)
    found = []
    if roots:
        st = np.mod(np.array(roots), 1.0)
        r, feet, centers = res(st[:, 0], st[:, 1], full=True)
        for k in range(len(st)):
            if not np.all(np.isfinite(r[k])):
                continue
            resid = float(np.max(np.abs(r[k])))
            if resid >= 1e-8:
                continue
            params = (float(st[k, 0]), float(feet[k, 0]), float(st[k, 1]), float(feet[k, 1]))
            x = centers[k]
            circle = CirclePair(sc.surface, x, geo.log_map(sc.surface, x, sc(st[k, 0])))
            ins = Inscription(params, circle, triple, resid)
            p = np.asarray(params)
            if np.min(circular_gap(p[:, None], p[None, :])[np.triu_indices(4, 1)]) <= 1e-6:
                continue
            if any(np.all(circular_gap(p, np.asarray(o.s)) < DEDUP_TOL) for o in found):
                continue
            found.append(ins)
    return found


def match_sets(a, b, tol):
    """Max over each list of the distance to the nearest element of the other."""
    def gap(x, y):
        return float(np.max(circular_gap(np.asarray(x.s), np.asarray(y.s))))

    worst_a = max((min((gap(x, y) for y in b), default=np.inf) for x in a), default=0.0)
    worst_b = max((min((gap(y, x) for x in a), default=np.inf) for y in b), default=0.0)
    return worst_a <= tol and worst_b <= tol, max(worst_a, worst_b)
