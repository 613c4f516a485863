import numpy as np
import pytest

from geoinscribe import geometry as geo
from geoinscribe.curve import circular_gap
from geoinscribe.curvespec import fourier_curve, load_bundled
from geoinscribe.engine import (Inscription, evaluate_grid, find_inscriptions, grid_scan,
                                rectangle_search_sphere, refine, residual, validate_inscription,
                                QuadMapper)
from geoinscribe.errors import ConvergenceError, DiagonalError, HypothesisError
from geoinscribe.geometry import Surface
from geoinscribe.quad import AngleTriple, CirclePair

RECT = AngleTriple(np.pi / 2, np.pi, np.pi)


@pytest.fixture(scope="module")
def trefoil_found(trefoil):
    found, stats = find_inscriptions(trefoil, RECT, n=128)
    return found, stats


# -- residual -----------------------------------------------------------------

@pytest.mark.parametrize("triple", [RECT, AngleTriple(np.pi / 3, 2 * np.pi / 3, np.pi / 2),
                                    AngleTriple(1.0, 2.5, 1.9)])
def test_circle_residual_vanishes_on_family(disk_circle, triple):
    s = np.linspace(0.0, 1.0, 13, endpoint=False) + 0.01
    r1, r2 = residual(disk_circle, s, s + triple.phi1 / (2 * np.pi), triple)
    assert np.max(np.abs(r1)) < 1e-9 and np.max(np.abs(r2)) < 1e-9


def test_residual_rejects_diagonal(trefoil):
    with pytest.raises(DiagonalError):
        residual(trefoil, 0.3, 0.3 + 5e-5, RECT)


def test_residual_continuity(trefoil):
    mapper = QuadMapper(trefoil.surface, RECT)

    def jump(n):
        v = evaluate_grid(trefoil, n, mapper)
        d = np.abs(np.diff(v, axis=0))
        return np.nanmax(d[np.isfinite(d)])

    coarse, fine = jump(128), jump(256)
    # halving the spacing roughly halves the neighbour differences: no jumps
    assert fine < 0.7 * coarse


def test_residual_shift_invariance(trefoil):
    k, n = 16, len(trefoil)
    sh = trefoil.shifted(k)
    s, t = np.array([0.1, 0.4]), np.array([0.55, 0.9])
    a = residual(trefoil, s, t, RECT)
    b = residual(sh, s - k / n, t - k / n, RECT)
    assert np.allclose(a, b, atol=1e-12)


# -- grid scan -----------------------------------------------------------------

def test_grid_scan_circle_family(disk_circle):
    scan = grid_scan(disk_circle, RECT, n=128)
    offsets = np.mod(scan.seeds[:, 1] - scan.seeds[:, 0], 1.0)
    assert len(scan) >= 64
    assert np.all(np.abs(offsets - 0.5) <= 1.5 / 128)
    assert len(np.unique(np.round(scan.seeds[:, 0] * 128))) >= 64


def test_grid_scan_perturbed_has_candidates(trefoil):
    scan = grid_scan(trefoil, RECT, n=64)
    assert len(scan) >= 1
    assert scan.values.shape == (64, 64, 2)
    assert np.all(np.isnan(scan.values[np.arange(64), np.arange(64)]))


def test_grid_scan_minimum_size(trefoil):
    with pytest.raises(ValueError):
        grid_scan(trefoil, RECT, n=32)


# -- refine --------------------------------------------------------------------

def test_trefoil_rectangle_found(trefoil, trefoil_found):
    found, stats = trefoil_found
    assert len(found) >= 1
    assert stats["seeds"] >= len(found)
    for ins in found:
        assert ins.residual < 1e-8
        assert validate_inscription(ins, trefoil).passed


def test_trefoil_symmetry(trefoil_found):
    # the curve is invariant under rotation by 1/3, so solutions come in threes
    found, _ = trefoil_found
    assert len(found) % 3 == 0


@pytest.mark.parametrize("offset", [0.0, 3e-3, 1 / 128])
def test_exact_circle_refines_fast(disk_circle, offset):
    ins = refine(disk_circle, (0.1, 0.6 + offset), RECT)
    assert ins.iterations <= 2
    assert ins.residual < 1e-8


def test_refine_diagonal_seed(trefoil):
    with pytest.raises(DiagonalError):
        refine(trefoil, (0.25, 0.25 + 1e-5), RECT)


def test_refine_reports_nonconvergence():
    # opposite points of a spherical curve are too far apart for phi1 = 0.5
    sc = load_bundled("spherical_latitude")
    with pytest.raises(ConvergenceError):
        refine(sc, (0.0, 0.5), AngleTriple(0.2, 0.5, 0.4))


def test_reparameterization_shift(trefoil, trefoil_found):
    found, _ = trefoil_found
    k = 8  # one grid cell at n = 128 for 1024 samples
    moved, _ = find_inscriptions(trefoil.shifted(k), RECT, n=128)
    assert len(moved) == len(found)
    for ins in moved:
        back = np.mod(np.asarray(ins.s) + k / len(trefoil), 1.0)
        gaps = [np.max(circular_gap(back, np.asarray(f.s))) for f in found]
        assert min(gaps) < 1e-6


@pytest.mark.parametrize("triple", [AngleTriple(np.pi / 3, 2 * np.pi / 3, np.pi / 2),
                                    AngleTriple(np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6)])
def test_general_triples_on_trefoil(trefoil, triple):
    found, _ = find_inscriptions(trefoil, triple, n=128)
    assert found
    for ins in found:
        rep = validate_inscription(ins, trefoil)
        assert rep.passed, rep.checks


def test_ellipse_square():
    sc = load_bundled("planar_ellipse")
    found, _ = find_inscriptions(sc, RECT, n=128)
    assert found
    A, B = 1.2, 0.8
    c = A * B / np.hypot(A, B)
    for ins in found:
        pts = sc(np.asarray(ins.s))
        assert ins.residual < 1e-8
        assert np.allclose(np.abs(pts[:, :2]), c, atol=1e-8)
        assert np.allclose(ins.circle.center, 0, atol=1e-8)


# -- spherical rectangles -------------------------------------------------------

def test_latitude_circle_family():
    sc = fourier_curve("embedded-r3", 0.8, samples=512)
    found = rectangle_search_sphere(sc, np.pi / 3, n=128)
    assert len(found) >= 32
    for ins in found[:8]:
        assert validate_inscription(ins, sc).passed
        assert np.allclose(ins.circle.center, [0, 0, 1], atol=1e-8)


def test_perturbed_latitude_rectangle():
    sc = load_bundled("spherical_latitude")
    found = rectangle_search_sphere(sc, np.pi / 2, n=128)
    assert found
    for ins in found:
        assert ins.residual < 1e-8
        assert ins.triple.as_tuple() == pytest.approx((np.pi / 2, np.pi, np.pi))
        assert validate_inscription(ins, sc).passed


def test_rectangle_search_rejects_large_diameter():
    with pytest.warns(UserWarning):
        sc = fourier_curve("embedded-r3", np.pi / 2, cos=[0, 0.1], samples=512)
    with pytest.raises(HypothesisError):
        rectangle_search_sphere(sc, 1.0)


def test_rectangle_search_needs_sphere(trefoil):
    with pytest.raises(HypothesisError):
        rectangle_search_sphere(trefoil, 1.0)


# -- validation ------------------------------------------------------------------

def test_jittered_inscription_fails(trefoil, trefoil_found):
    ins = trefoil_found[0][0]
    s = list(ins.s)
    s[1] += 1e-4
    bad = Inscription(tuple(s), ins.circle, ins.triple, ins.residual)
    rep = validate_inscription(bad, trefoil)
    assert not rep.passed
    assert rep.failures()


def test_moved_circle_fails(trefoil, trefoil_found):
    ins = trefoil_found[0][0]
    x = geo.exp_map(Surface.HYPERBOLIC, ins.circle.center, 1e-5 * ins.circle.radial)
    bad = Inscription(ins.s, CirclePair(Surface.HYPERBOLIC, x, ins.circle.radial),
                      ins.triple, ins.residual)
    assert "equidistance" in validate_inscription(bad, trefoil).failures()


def test_diagonal_quadruple_fails(trefoil, trefoil_found):
    ins = trefoil_found[0][0]
    bad = Inscription((0.2,) * 4, ins.circle, ins.triple, 0.0)
    rep = validate_inscription(bad, trefoil)
    assert "distinct" in rep.failures()
