"""Search for inscribed cyclic quadrilaterals and rectangles in a sampled curve.

A pair of curve parameters ``(s, t)`` gives two vertices ``p1 = gamma(s)``
and ``p3 = gamma(t)``; the quadrilateral map supplies ``p2`` and ``p4``.
The residual is the pair of signed distances from ``p2`` and ``p4`` to the
curve, so inscriptions are the common zeros of a map from the torus to R^2
away from the diagonal ``s = t``.  Seeds come from a grid scan and are
polished by a damped Gauss-Newton iteration with a finite-difference Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .curve import SampledCurve, circular_gap
from .errors import ConvergenceError, DiagonalError, HypothesisError
from .flow import PairState, midpoint_axis
from .geometry import Surface
from .quad import AngleTriple, CirclePair, f_phi_inverse, quad_vertices, vertex_angles

BAND = 1e-4
RESIDUAL_TOL = 1e-8
DEDUP_TOL = 1e-4
DISTINCT_TOL = 1e-6
COARSE_THRESHOLD = 0.05
MAX_ITER = 50
_FD = 1e-7
_RCOND = 1e-5


@dataclass
class Inscription:
    """Four curve parameters of an inscribed quadrilateral and its circle."""

    s: tuple
    circle: CirclePair
    triple: AngleTriple
    residual: float
    iterations: int = 0

    @property
    def s1(self):
        return self.s[0]

    @property
    def s2(self):
        return self.s[1]

    @property
    def s3(self):
        return self.s[2]

    @property
    def s4(self):
        return self.s[3]


@dataclass
class ValidationReport:
    checks: dict = field(default_factory=dict)

    def add(self, name, value, limit, passed=None):
        ok = bool(value < limit) if passed is None else bool(passed)
        self.checks[name] = (float(value), ok)

    @property
    def passed(self):
        return all(ok for _, ok in self.checks.values())

    def failures(self):
        return [k for k, (_, ok) in self.checks.items() if not ok]


# ---------------------------------------------------------------------------
# residual

class QuadMapper:
    """``(p1, p3) -> (p2, p4, circle)`` through the quadrilateral map."""

    def __init__(self, surface, triple: AngleTriple):
        self.surface = geo.as_surface(surface)
        self.triple = triple

    def admissible(self, P, Q):
        d = geo.distance(self.surface, P, Q)
        ok = d > 1e-8
        if self.surface is Surface.SPHERICAL:
            ok &= np.sin(0.5 * d) < np.sin(0.5 * self.triple.phi1) * (1 - 1e-9)
        return ok

    def __call__(self, P, Q):
        t = self.triple
        cp = f_phi_inverse(self.surface, P, Q, t.phi1)
        return self._complete(cp)

    def _complete(self, cp):
        t = self.triple
        s = self.surface
        v2 = geo.rotate_tangent(s, cp.center, cp.radial, t.theta)
        v4 = geo.rotate_tangent(s, cp.center, cp.radial, t.theta + t.phi2)
        return (geo.exp_map(s, cp.center, v2, check=False),
                geo.exp_map(s, cp.center, v4, check=False), cp)


class FlowMapper(QuadMapper):
    """``(p1, p3) -> (p2, p4)`` through the time-theta rectangle flow."""

    def __init__(self, surface, theta):
        super().__init__(surface, AngleTriple.rectangle(theta))

    def admissible(self, P, Q):
        d = geo.distance(self.surface, P, Q)
        ok = d > 1e-8
        if self.surface is Surface.SPHERICAL:
            ok &= d < np.pi - 1e-9
        return ok

    def __call__(self, P, Q):
        cp = midpoint_axis(PairState(self.surface, P, Q))
        return self._complete(cp)


def _mapper_for(sc, triple, mapper):
    return mapper if mapper is not None else QuadMapper(sc.surface, triple)


def _residual_batch(sc: SampledCurve, s, t, mapper, with_feet=False):
    """Residual at parameter pairs; NaN where undefined (diagonal band, inadmissible)."""
    s = np.asarray(s, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    out = np.full((len(s), 2), np.nan)
    feet = np.full((len(s), 2), np.nan)
    P = sc(s)
    Q = sc(t)
    ok = (circular_gap(s, t) > BAND) & mapper.admissible(P, Q)
    idx = np.nonzero(ok)[0]
    if len(idx):
        p2, p4, _ = mapper(P[idx], Q[idx])
        u, r = sc.project(np.stack([p2, p4], axis=1))
        out[idx] = r
        feet[idx] = u
    if with_feet:
        return out, feet
    return out


def residual(sc: SampledCurve, s, t, triple: AngleTriple, mapper=None):
    """Signed distances of ``p2`` and ``p4`` to the curve for ``(p1, p3) = (gamma(s), gamma(t))``."""
    if np.any(circular_gap(s, t) <= BAND):
        raise DiagonalError("(s, t) lies in the diagonal band")
    mapper = _mapper_for(sc, triple, mapper)
    r = _residual_batch(sc, s, t, mapper)
    if np.any(np.isnan(r)):
        raise geo.GeometryError("quadrilateral map undefined at this pair")
    shape = np.shape(s)
    return r[:, 0].reshape(shape), r[:, 1].reshape(shape)


# ---------------------------------------------------------------------------
# grid scan

@dataclass
class GridScan:
    n: int
    values: np.ndarray = field(repr=False)
    seeds: np.ndarray
    scores: np.ndarray

    def __len__(self):
        return len(self.seeds)

    def __iter__(self):
        return iter(map(tuple, self.seeds))


def evaluate_grid(sc, n, mapper):
    g = np.arange(n) / n
    S, T = np.meshgrid(g, g, indexing="ij")
    vals = np.full((n * n, 2), np.nan)
    flat_s, flat_t = S.ravel(), T.ravel()
    chunk = 16384
    for start in range(0, n * n, chunk):
        sl = slice(start, start + chunk)
        vals[sl] = _residual_batch(sc, flat_s[sl], flat_t[sl], mapper)
    return vals.reshape(n, n, 2)


def seeds_from_grid(vals, threshold=COARSE_THRESHOLD, min_gap=3):
    """Cells with a sign change in both components, plus small local minima."""
    n = vals.shape[0]
    corners = np.stack([vals, np.roll(vals, -1, 0), np.roll(vals, -1, 1),
                        np.roll(np.roll(vals, -1, 0), -1, 1)], axis=0)
    finite = np.all(np.isfinite(corners), axis=(0, 3))
    with np.errstate(invalid="ignore"):
        hi = np.nanmax(corners, axis=0)
        lo = np.nanmin(corners, axis=0)
    change = finite & np.all((hi > 0) & (lo < 0), axis=-1)
    norm = np.max(np.abs(vals), axis=-1)
    cell_score = np.nanmin(np.max(np.abs(corners), axis=-1), axis=0)
    ii, jj = np.nonzero(change)
    seeds = [((i + 0.5) / n, (j + 0.5) / n) for i, j in zip(ii, jj)]
    scores = list(cell_score[ii, jj])

    padded = np.where(np.isfinite(norm), norm, np.inf)
    is_min = np.isfinite(norm) & (norm < threshold)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= padded <= np.roll(np.roll(padded, di, 0), dj, 1)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, n - gap)
    is_min &= gap >= min_gap
    ii, jj = np.nonzero(is_min & ~change)
    seeds += [(i / n, j / n) for i, j in zip(ii, jj)]
    scores += list(norm[ii, jj])
    order = np.argsort(scores, kind="stable")
    return np.asarray(seeds, dtype=float).reshape(-1, 2)[order], np.asarray(scores)[order]


def grid_scan(sc: SampledCurve, triple: AngleTriple, n=256, mapper=None) -> GridScan:
    """Seed cells for root refinement on an ``n x n`` torus grid."""
    if n < 64:
        raise ValueError("grid_scan needs n >= 64")
    mapper = _mapper_for(sc, triple, mapper)
    vals = evaluate_grid(sc, n, mapper)
    seeds, scores = seeds_from_grid(vals)
    return GridScan(n, vals, seeds, scores)


# ---------------------------------------------------------------------------
# refinement

def _newton_batch(sc, seeds, mapper, tol=RESIDUAL_TOL, max_iter=MAX_ITER):
    """Damped Newton on many seeds at once. Returns (st, r, iters, converged)."""
    st = np.array(seeds, dtype=float).reshape(-1, 2)
    m = len(st)
    iters = np.zeros(m, dtype=int)
    r = _residual_batch(sc, st[:, 0], st[:, 1], mapper)
    active = np.all(np.isfinite(r), axis=1)
    done = np.zeros(m, dtype=bool)
    target = min(tol, 1e-12)
    for _ in range(max_iter):
        nrm = np.max(np.abs(r), axis=1)
        done |= active & (nrm < target)
        work = np.nonzero(active & ~done)[0]
        if not len(work):
            break
        iters[work] += 1
        s0, t0 = st[work, 0], st[work, 1]
        rs = _residual_batch(sc, np.concatenate([s0 + _FD, s0]),
                             np.concatenate([t0, t0 + _FD]), mapper)
        k = len(work)
        jac = np.stack([(rs[:k] - r[work]) / _FD, (rs[k:] - r[work]) / _FD], axis=-1)
        bad = ~np.all(np.isfinite(jac), axis=(1, 2))
        bad |= np.max(np.abs(np.where(bad[:, None, None], 0.0, jac)), axis=(1, 2)) == 0
        step = np.zeros((k, 2))
        good = ~bad
        if np.any(good):
            # minimum-norm step: rank-deficient where solutions form a family
            pinv = np.linalg.pinv(jac[good], rcond=_RCOND)
            step[good] = -(pinv @ r[work][good][..., None])[..., 0]
        step = np.clip(step, -0.05, 0.05)
        # backtracking on the max-norm
        lam = np.ones(k)
        accepted = np.zeros(k, dtype=bool)
        old = nrm[work]
        new_st = st[work].copy()
        new_r = r[work].copy()
        for _ in range(12):
            pending = ~accepted & good
            if not np.any(pending):
                break
            trial = st[work][pending] + lam[pending, None] * step[pending]
            rt = _residual_batch(sc, trial[:, 0], trial[:, 1], mapper)
            ok = np.all(np.isfinite(rt), axis=1) & (np.max(np.abs(rt), axis=1) < old[pending])
            pidx = np.nonzero(pending)[0]
            new_st[pidx[ok]] = trial[ok]
            new_r[pidx[ok]] = rt[ok]
            accepted[pidx[ok]] = True
            lam[pidx[~ok]] *= 0.5
        stalled = ~accepted
        st[work] = np.mod(new_st, 1.0)
        r[work] = new_r
        # stalled seeds at the floating-point floor count as converged
        floor = stalled & (old < tol)
        done[work[floor]] = True
        active[work[stalled & ~floor]] = False
    nrm = np.max(np.abs(r), axis=1)
    converged = np.isfinite(nrm) & (nrm < tol)
    return st, r, iters, converged


def _package(sc, st, mapper, iters):
    s, t = st[:, 0], st[:, 1]
    r, feet = _residual_batch(sc, s, t, mapper, with_feet=True)
    _, _, cp = mapper(sc(s), sc(t))
    out = []
    for k in range(len(st)):
        params = (float(s[k]), float(feet[k, 0]), float(t[k]), float(feet[k, 1]))
        circle = CirclePair(sc.surface, cp.center[k], cp.radial[k])
        out.append(Inscription(params, circle, mapper.triple,
                               float(np.max(np.abs(r[k]))), int(iters[k])))
    return out


def _distinct(params, tol=DISTINCT_TOL):
    p = np.asarray(params)
    gaps = circular_gap(p[:, None], p[None, :])
    return bool(np.all(gaps[np.triu_indices(4, 1)] > tol))


def refine_many(sc, seeds, triple, mapper=None, tol=RESIDUAL_TOL):
    """Refine seeds in a batch; returns deduplicated inscriptions and failure counts."""
    mapper = _mapper_for(sc, triple, mapper)
    stats = {"seeds": int(len(seeds)), "diverged": 0, "diagonal": 0, "duplicates": 0}
    if not len(seeds):
        return [], stats
    st, r, iters, conv = _newton_batch(sc, seeds, mapper, tol)
    stats["diverged"] = int(np.sum(~conv))
    found = []
    if np.any(conv):
        for ins in _package(sc, st[conv], mapper, iters[conv]):
            if circular_gap(ins.s1, ins.s3) <= BAND or not _distinct(ins.s):
                stats["diagonal"] += 1
                continue
            if any(_same(ins, other) for other in found):
                stats["duplicates"] += 1
                continue
            found.append(ins)
    return found, stats


def _same(a, b, tol=DEDUP_TOL):
    return bool(np.all(circular_gap(np.asarray(a.s), np.asarray(b.s)) < tol))


def refine(sc: SampledCurve, seed, triple: AngleTriple, mapper=None) -> Inscription:
    """Polish one seed ``(s, t)`` into an inscription."""
    seed = np.asarray(seed, dtype=float).reshape(1, 2)
    if circular_gap(seed[0, 0], seed[0, 1]) <= BAND:
        raise DiagonalError("seed lies in the diagonal band")
    mapper = _mapper_for(sc, triple, mapper)
    st, r, iters, conv = _newton_batch(sc, seed, mapper)
    if not conv[0]:
        raise ConvergenceError(f"no convergence from seed {tuple(seed[0])} "
                               f"(residual {np.max(np.abs(r[0])):.3g})")
    ins = _package(sc, st, mapper, iters)[0]
    if circular_gap(ins.s1, ins.s3) <= BAND or not _distinct(ins.s):
        raise DiagonalError("refinement collapsed onto the diagonal")
    return ins


def find_inscriptions(sc: SampledCurve, triple: AngleTriple, n=256, mapper=None,
                      max_seeds=None):
    """Grid scan followed by batched refinement of every (or the best) seeds."""
    mapper = _mapper_for(sc, triple, mapper)
    scan = grid_scan(sc, triple, n, mapper)
    seeds = scan.seeds if max_seeds is None else scan.seeds[:max_seeds]
    found, stats = refine_many(sc, seeds, triple, mapper)
    stats["grid"] = n
    stats["candidates"] = len(scan)
    return found, stats


def rectangle_search_sphere(sc: SampledCurve, theta, n=256, max_seeds=None, return_stats=False):
    """Type-theta rectangles on a spherical curve via the rectangle flow."""
    if sc.surface is not Surface.SPHERICAL:
        raise HypothesisError("rectangle_search_sphere needs a spherical curve")
    if sc.diameter >= np.pi - 1e-9:
        raise HypothesisError(f"curve diameter {sc.diameter:.6f} >= pi: it meets its antipodal set")
    mapper = FlowMapper(sc.surface, theta)
    found, stats = find_inscriptions(sc, mapper.triple, n, mapper, max_seeds)
    return (found, stats) if return_stats else found


# ---------------------------------------------------------------------------
# validation

def validate_inscription(ins: Inscription, sc: SampledCurve, tol=RESIDUAL_TOL) -> ValidationReport:
    """Recheck an inscription from scratch against the curve."""
    rep = ValidationReport()
    s = sc.surface
    pts = sc(np.asarray(ins.s))
    cp = ins.circle
    r = float(cp.radius)
    rep.add("residual", ins.residual, tol)
    rep.add("equidistance", np.max(np.abs(geo.distance(s, cp.center, pts) - r)), tol)
    ang = vertex_angles(cp, pts)
    diff = np.mod(ang - ins.triple.vertex_angles + np.pi, 2 * np.pi) - np.pi
    rep.add("angle_pattern", np.max(np.abs(diff)), tol)
    _, dist = sc.project(quad_vertices(cp, ins.triple))
    rep.add("on_curve", np.max(np.abs(dist)), tol)
    p = np.asarray(ins.s)
    gaps = circular_gap(p[:, None], p[None, :])[np.triu_indices(4, 1)]
    rep.checks["distinct"] = (float(np.min(gaps)), bool(np.min(gaps) > DISTINCT_TOL))
    return rep
