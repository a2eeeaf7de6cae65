import numpy as np
import pytest

from conftest import random_disk
from specquant.cmv import (
    bareiss_det,
    build_cmv,
    cmv_basis_eval,
    finite_cmv,
    monic_via_det,
    theta_block,
)
from specquant.coeffs import VerblunskySpec
from specquant.opuc import monic_values
from specquant.periodic import two_periodic_circle_measure


def test_theta_block_examples():
    assert np.allclose(theta_block(0), [[0, 1], [1, 0]])
    assert np.allclose(theta_block(1), [[1, 0], [0, -1]])
    assert np.allclose(theta_block(0.6), [[0.6, 0.8], [0.8, -0.6]])


def test_free_cmv_structure():
    C = build_cmv(VerblunskySpec.constant(0), 4).dense
    # row 2 couples to column 4, outside the block
    expected = np.array([[0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
    assert np.allclose(C, expected)
    big = build_cmv(VerblunskySpec.constant(0), 6).dense
    assert big[2, 4] == 1 and big[5, 3] == 1


def test_first_column(rng):
    a = random_disk(rng, 8)
    C = build_cmv(VerblunskySpec.from_list(a), 8).dense
    assert C[0, 0] == pytest.approx(np.conj(a[0]))
    assert C[1, 0] == pytest.approx(np.sqrt(1 - abs(a[0]) ** 2))


def test_factorisation_and_band(rng):
    op = build_cmv(VerblunskySpec.from_list(random_disk(rng, 16)), 16)
    assert np.max(np.abs(op.L @ op.M - op.dense)) < 1e-14
    i, j = np.indices(op.dense.shape)
    assert np.all(op.dense[np.abs(i - j) > 2] == 0)


def test_truncation_is_block_of_larger(rng):
    spec = VerblunskySpec.from_list(random_disk(rng, 20))
    assert np.allclose(build_cmv(spec, 20).dense[:9, :9], build_cmv(spec, 9).dense, atol=1e-15)


def test_det_examples(rng):
    a = complex(random_disk(rng))
    z = 0.3 + 0.7j
    assert monic_via_det(VerblunskySpec.constant(a), 1, z) == pytest.approx(z - np.conj(a))
    for n in range(1, 7):
        assert monic_via_det(VerblunskySpec.constant(0), n, z) == pytest.approx(z**n, abs=1e-14)
    spec = VerblunskySpec.two_periodic(0.5, -0.5)
    zz = np.exp(2j * np.pi * rng.uniform(size=50))
    rec = monic_values(spec, 6, zz)
    det = np.array([monic_via_det(spec, 6, w) for w in zz])
    assert np.max(np.abs(rec - det)) < 1e-10


def test_bareiss_against_numpy(rng):
    m = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    assert bareiss_det(m) == pytest.approx(np.linalg.det(m), rel=1e-12)


def test_finite_cmv_examples(rng):
    assert np.allclose(finite_cmv([1]).dense, [[1]])
    assert np.allclose(np.sort(finite_cmv([0, 1]).eigenvalues().real), [-1, 1])
    a = np.concatenate([random_disk(rng, 7), [np.exp(1.1j)]])
    op = finite_cmv(a)
    assert np.max(np.abs(op.unitarity_defect())) < 1e-12


def test_cmv_basis_free_and_chi0(rng):
    z = np.exp(1j * np.linspace(0, 6, 9))
    chi = cmv_basis_eval(VerblunskySpec.constant(0), 7, z)
    for k in range(4):
        assert np.allclose(chi[2 * k], z ** (-k))
        assert np.allclose(chi[2 * k + 1], z ** (k + 1))
    chi = cmv_basis_eval(VerblunskySpec.from_list(random_disk(rng, 7)), 7, z)
    assert np.allclose(chi[0], 1)


def test_matrix_elements_from_measure():
    a, b = 0.4 + 0.1j, -0.3 + 0.2j
    spec = VerblunskySpec.two_periodic(a, b)
    measure = two_periodic_circle_measure(a, b)
    n = 7
    C = build_cmv(spec, n + 2).dense

    def chi(theta):
        return cmv_basis_eval(spec, n, np.exp(1j * np.atleast_1d(theta)))

    G = np.zeros((n, n), complex)
    for m in range(n):
        for k in range(n):
            G[m, k] = np.squeeze(measure.integrate(
                lambda th: np.conj(chi(th)[m]) * np.exp(1j * th) * chi(th)[k], nodes=1024))
    assert np.max(np.abs(G - C[:n, :n])) < 1e-6
