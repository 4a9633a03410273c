import numpy as np
import pytest

from phonoscope import CostMatrix, PhonemeInventory
from phonoscope.clustering import SpeakerVector


@pytest.fixture(scope="session")
def inv():
    return PhonemeInventory.default()


@pytest.fixture(scope="session")
def uniform(inv):
    return CostMatrix.uniform(inv)


@pytest.fixture(scope="session")
def weighted(inv):
    """A cost matrix where HH deletes cheaply and IH/IY are near neighbors."""
    return make_weighted_costs(inv)


def make_weighted_costs(inv):
    n = len(inv)
    eps = inv.epsilon_index
    grid = np.ones((n, n))
    np.fill_diagonal(grid, 0.0)
    grid[:, eps] = 0.9
    grid[eps, :] = 0.9
    grid[inv.index("HH"), eps] = 0.3
    hh, ih, iy = inv.index("HH"), inv.index("IH"), inv.index("IY")
    grid[ih, iy] = 0.3
    grid[iy, ih] = 0.3
    assert grid[hh, eps] + grid[ih, iy] < grid[hh, iy] + grid[ih, eps]
    grid[eps, eps] = 0.0
    return CostMatrix(inv, grid)


def idx(inv, labels):
    """'HH IH Z' -> [16, 17, 38]."""
    return [inv.index(s) for s in labels.split()]


def random_cost_matrix(inv, rng, low=0.05, high=2.0):
    n = len(inv)
    grid = rng.uniform(low, high, size=(n, n))
    np.fill_diagonal(grid, 0.0)
    grid[inv.epsilon_index, inv.epsilon_index] = 0.0
    return CostMatrix(inv, grid)


def make_group_vectors(seed=0, groups=6, per_group=4, dim=1600):
    """Synthetic speaker vectors: per-group templates plus small noise.

    Noise magnitude stays well under a tenth of the smallest
    inter-template distance, so group recovery is unambiguous.
    """
    rng = np.random.default_rng(seed)
    templates = rng.normal(0.0, 1.0, size=(groups, dim))
    dists = [
        float(np.linalg.norm(templates[a] - templates[b]))
        for a in range(groups)
        for b in range(a + 1, groups)
    ]
    sigma = 0.1 * min(dists) / np.sqrt(dim)
    vectors, labels = [], {}
    for g in range(groups):
        for i in range(per_group):
            noise = rng.normal(0.0, sigma, size=dim)
            sid = f"spk_{g}_{i}"
            vectors.append(SpeakerVector(sid, templates[g] + noise))
            labels[sid] = f"group{g}"
    return vectors, labels


_ACCEPTANCE_RESULTS = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{outcome:6s}  {name}")
