import numpy as np
import pytest

from specquant.coeffs import WalkSpec


def random_walk(rng, n_rows, r_min=0.0, r_max=0.5):
    """Random valid half-line walk with ``n_rows`` rows (r_k in [r_min, r_max))."""
    p0 = rng.uniform(0.1, 0.9)
    p, q, r = [p0], [0.0], [1.0 - p0]
    for _ in range(1, n_rows):
        rk = rng.uniform(r_min, r_max)
        pk = rng.uniform(0.05, 0.95) * (1.0 - rk)
        p.append(pk)
        q.append(1.0 - rk - pk)
        r.append(rk)
    return WalkSpec.from_lists(p, q, r)


def random_chain(rng, n):
    P = rng.uniform(size=(n, n)) * (rng.uniform(size=(n, n)) < 0.7)
    P[np.arange(n), rng.integers(0, n, n)] += 0.1
    return P / P.sum(axis=1, keepdims=True)


def random_disk(rng, size=None, radius=0.9):
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
