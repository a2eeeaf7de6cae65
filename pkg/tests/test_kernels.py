import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_disk, random_walk
from specquant import kernels

BACKENDS = kernels.available_backends()


def test_compiled_backend_present():
    assert "cython" in BACKENDS, "compiled extension missing; reinstall the package"


@pytest.mark.parametrize("backend", BACKENDS)
def test_schur_parity(rng, backend):
    a = random_disk(rng, 300)
    z = random_disk(rng, 40, radius=0.99)
    ref = kernels.schur_cf(a, z, backend="python")
    assert np.max(np.abs(kernels.schur_cf(a, z, backend=backend) - ref)) < 1e-13


@pytest.mark.parametrize("backend", BACKENDS)
def test_jacobi_parity(rng, backend):
    p, q, r = random_walk(rng, 300).arrays(300)
    z = rng.uniform(-1, 1, 40) + 1j * rng.uniform(1e-4, 0.5, 40)
    args = (r, p[:-1] * q[1:], z)
    ref = kernels.jacobi_cf(*args, backend="python")
    assert np.max(np.abs(kernels.jacobi_cf(*args, backend=backend) - ref)) < 1e-12


@pytest.mark.parametrize("backend", BACKENDS)
def test_szego_parity(rng, backend):
    a = random_disk(rng, 64)
    z = np.exp(2j * np.pi * rng.uniform(size=30))
    ref = kernels.szego_values(a, z, backend="python")
    got = kernels.szego_values(a, z, backend=backend)
    for x, y in zip(got, ref):
        # phi_n grows geometrically when |alpha| is near 1: compare relatively
        assert np.max(np.abs(x - y) / np.maximum(1, np.abs(y))) < 1e-12


@pytest.mark.parametrize("backend", BACKENDS)
def test_three_term_parity(rng, backend):
    p, q, r = random_walk(rng, 64).arrays(64)
    x = rng.uniform(-1, 1, 30)
    ref = kernels.three_term_values(p, q, r, x, backend="python")
    got = kernels.three_term_values(p, q, r, x, backend=backend)
    assert np.max(np.abs(got - ref) / np.maximum(1, np.abs(ref))) < 1e-12


def test_scalar_and_shape(rng):
    a = random_disk(rng, 5)
    assert np.shape(kernels.schur_cf(a, 0.3)) == ()
    assert kernels.schur_cf(a, np.zeros((2, 3))).shape == (2, 3)
    assert kernels.szego_values(a, np.ones((2, 2)))[0].shape == (6, 2, 2)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_env_switch_selects_fallback():
    env = dict(os.environ, SPECQUANT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import specquant; print(specquant.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
