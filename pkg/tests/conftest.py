import numpy as np
import pytest

from potevt import dist, rng

ACCEPTANCE_RESULTS = {}


def gpd_sample(seed, n, xi, beta=1.0):
    return np.asarray(dist.gpd_quantile(rng.uniforms(seed, n), dist.GpdParams(xi, beta)))


def gpd_tailed(seed, n, u, xi, beta=1.0, tail=0.1):
    """Sub-threshold uniform noise on [0, u] with a GPD tail above ``u`` of mass ``tail``."""
    v = rng.uniforms(seed, 2 * n)
    pick, w = v[:n], v[n:]
    body = u * w
    excess = dist.gpd_quantile(w, dist.GpdParams(xi, beta))
    return np.where(pick < tail, u + excess, body)


@pytest.fixture
def sample():
    return gpd_sample


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
