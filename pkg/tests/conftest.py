from contextlib import contextmanager
from time import perf_counter
from types import SimpleNamespace

import numpy as np
import pytest

from geoinscribe.curvespec import fourier_curve

CURVED = ["hyperbolic", "spherical"]
ALL = ["hyperbolic", "spherical", "euclidean"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def trefoil():
    """Disk-model curve r(t) = 0.5 + 0.05 cos(3 * 2 pi t)."""
    return fourier_curve("poincare-disk", 0.5, cos=[0, 0, 0.05])


@pytest.fixture(scope="session")
def disk_circle():
    return fourier_curve("poincare-disk", 0.5, samples=512)


def random_pairs(surface, n, rng, spread=1.0, min_sep=0.05, max_sep=None):
    from geoinscribe import geometry as geo
    out_p, out_q = [], []
    while sum(len(p) for p in out_p) < n:
        p = geo.random_points(surface, n, rng, spread)
        q = geo.random_points(surface, n, rng, spread)
        d = geo.distance(surface, p, q)
        keep = d > min_sep
        if max_sep is not None:
            keep &= d < max_sep
        out_p.append(p[keep])
        out_q.append(q[keep])
    return np.concatenate(out_p)[:n], np.concatenate(out_q)[:n]


# -- acceptance criteria report --------------------------------------------------

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE]

    @contextmanager
    def run(number, title):
        rec = SimpleNamespace(detail="", start=perf_counter())
        rec.elapsed = lambda: perf_counter() - rec.start
        status = "FAIL"
        try:
            yield rec
            status = "PASS"
        finally:
            line = f"{status} criterion {number:>2}: {title} | {rec.detail} | {rec.elapsed():.1f} s"
            lines.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(config.stash.get(_ACCEPTANCE, []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in lines:
            terminalreporter.write_line(line)
