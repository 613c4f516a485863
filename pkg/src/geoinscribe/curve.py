"""Closed curves sampled densely on a model surface."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from . import charts
from . import geometry as geo
from .errors import GeometryError
from .geometry import Surface

MIN_SAMPLES = 64
MAX_SPACING = 0.1
_CHUNK = 4096


def _segments_intersect(a):
    """Proper crossings between non-adjacent edges of the closed polygon ``a``."""
    n = len(a)
    nxt = np.roll(a, -1, axis=0)

    def orient(p, q, r):
        return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
                - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))

    idx = np.arange(n)
    for start in range(0, n, 256):
        i = idx[start:start + 256, None]
        j = idx[None, :]
        mask = (j > i + 1) & ~((i == 0) & (j == n - 1))
        p1, p2 = a[i], nxt[i]
        q1, q2 = a[j], nxt[j]
        d1 = orient(q1, q2, p1)
        d2 = orient(q1, q2, p2)
        d3 = orient(p1, p2, q1)
        d4 = orient(p1, p2, q2)
        hit = (d1 * d2 < 0) & (d3 * d4 < 0) & mask
        if np.any(hit):
            return True
    return False


class SampledCurve:
    """A closed curve given by ordered samples at parameters ``i / n``.

    Evaluation between samples uses a periodic cubic spline of the embedding
    coordinates followed by projection onto the surface, so the curve is C^2.
    """

    def __init__(self, surface, points, chart=None, validate=True):
        self.surface = geo.as_surface(surface)
        pts = geo.project_point(self.surface, np.asarray(points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise GeometryError("curve samples must be an (n, 3) array")
        self.points = pts
        self.chart = chart or charts.DEFAULT_CHART[self.surface]
        n = len(pts)
        self.params = np.arange(n) / n
        self._spline = CubicSpline(np.append(self.params, 1.0),
                                   np.vstack([pts, pts[:1]]),
                                   bc_type="periodic", axis=0)
        steps = geo.distance(self.surface, pts, np.roll(pts, -1, axis=0))
        self.spacing = float(steps.max())
        self.min_step = float(steps.min())
        self.diameter = self._diameter()
        if validate:
            self.validate()

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return (f"SampledCurve({self.surface.value}, n={len(self)}, "
                f"diameter={self.diameter:.4f})")

    def _diameter(self):
        best = 0.0
        for start in range(0, len(self.points), 512):
            block = self.points[start:start + 512, None, :]
            best = max(best, float(geo.distance(self.surface, block, self.points[None]).max()))
        return best

    @property
    def antipodal_clearance(self):
        """``pi - diameter`` on the sphere (positive iff the curve misses its antipode)."""
        if self.surface is Surface.SPHERICAL:
            return np.pi - self.diameter
        return np.inf

    def validate(self):
        n = len(self.points)
        if n < MIN_SAMPLES:
            raise GeometryError(f"need at least {MIN_SAMPLES} samples, got {n}")
        if self.min_step <= 0:
            raise GeometryError("curve has repeated consecutive samples")
        if self.spacing >= MAX_SPACING:
            raise GeometryError(f"sample spacing {self.spacing:.3g} exceeds {MAX_SPACING}")
        if _segments_intersect(charts.planar_coords(self.surface, self.points)):
            raise GeometryError("curve is not simple at sample resolution")
        return self

    def __call__(self, s, nu=0):
        """Curve point (``nu = 0``) or raw spline derivative of order ``nu`` at ``s``."""
        s = np.mod(np.asarray(s, dtype=float), 1.0)
        out = self._spline(s, nu)
        if nu == 0:
            out = geo.project_point(self.surface, out)
        return out

    def tangent(self, s):
        """Velocity at ``s`` projected onto the tangent plane."""
        c = self(s)
        return geo.project_tangent(self.surface, c, self(s, 1))

    def orientation(self):
        """+1 if the planar picture of the curve runs counterclockwise."""
        xy = charts.planar_coords(self.surface, self.points)
        x, y = xy[:, 0], xy[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        return 1 if area > 0 else -1

    def shifted(self, k):
        """Same curve with the parameter origin moved forward by ``k`` samples."""
        return SampledCurve(self.surface, np.roll(self.points, -k, axis=0),
                            chart=self.chart, validate=False)

    # -- nearest points --------------------------------------------------------

    def nearest_sample(self, X):
        """Index of the sample closest to each point of ``X``."""
        X = np.asarray(X, dtype=float).reshape(-1, 3)
        pts = self.points
        if self.surface is Surface.HYPERBOLIC:
            # maximise <X, c>_{-++} = -cosh d
            G = pts * np.array([-1.0, 1.0, 1.0])
            bias = np.zeros(len(pts))
        elif self.surface is Surface.SPHERICAL:
            G, bias = pts, np.zeros(len(pts))
        else:
            G, bias = pts, -0.5 * np.sum(pts * pts, axis=1)
        out = np.empty(len(X), dtype=int)
        for start in range(0, len(X), _CHUNK):
            score = X[start:start + _CHUNK] @ G.T + bias
            out[start:start + _CHUNK] = np.argmax(score, axis=1)
        return out

    def project(self, X, iters=12):
        """Foot-point parameter and signed distance of each point of ``X``.

        Newton on the parameter from the nearest sample; the sign is positive
        to the left of the direction of travel.
        """
        X = np.asarray(X, dtype=float)
        shape = X.shape[:-1]
        X = X.reshape(-1, 3)
        u = self.params[self.nearest_sample(X)]
        h = 1.0 / len(self)
        s = self.surface
        for _ in range(iters):
            c = self(u)
            c1 = self(u, 1)
            c2 = self(u, 2)
            if s is Surface.EUCLIDEAN:
                g1 = np.sum(c1 * (X - c), axis=1)
                g2 = np.sum(c2 * (X - c), axis=1) - np.sum(c1 * c1, axis=1)
            else:
                g1 = geo.inner(s, geo.project_tangent(s, c, c1), X)
                g2 = geo.inner(s, c2, X)
            step = np.where(g2 < 0, -g1 / np.where(g2 < 0, g2, -1.0), np.sign(g1) * h)
            step = np.clip(step, -h, h)
            u = u + step
            if np.all(np.abs(step) < 1e-15):
                break
        u = np.mod(u, 1.0)
        c = self(u)
        T = self.tangent(u)
        side = geo.area_form(s, c, T, X - c)
        dist = geo.distance(s, c, X)
        signed = np.where(side < 0, -dist, dist)
        return u.reshape(shape), signed.reshape(shape)


def circular_gap(a, b):
    """Distance between parameters on the unit circle R/Z."""
    d = np.mod(np.asarray(a) - np.asarray(b), 1.0)
    return np.minimum(d, 1.0 - d)
