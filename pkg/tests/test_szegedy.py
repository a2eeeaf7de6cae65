import numpy as np
import pytest

from conftest import random_chain, random_walk
from specquant.coeffs import WalkSpec
from specquant.errors import SpecError
from specquant.geronimus import walk_to_alphas
from specquant.szegedy import (
    cmv_basis_extraction,
    coin_block,
    complement_basis,
    discriminant,
    halfline_basis,
    halfline_blocks,
    lift_spectrum,
    one_step_distribution,
    stationary_coin_states,
    verify_lifting,
    walk_operator,
)
from specquant.walks import jacobi_matrix, transition_matrix

EXAMPLE = WalkSpec.constant(0.5, 0.375, 0.375)


def test_coin_states_examples():
    st = stationary_coin_states(np.eye(3))
    assert [s.amplitudes for s in st] == [{(j, j): 1} for j in range(3)]
    st = stationary_coin_states([[0, 1], [1, 0]])
    assert st[0].amplitudes == {(0, 1): 1} and st[1].amplitudes == {(1, 0): 1}
    P = np.array([[0.625, 0.375, 0], [0.375, 0.25, 0.375], [0, 0.375, 0.625]])
    amps = stationary_coin_states(P)[1].amplitudes
    assert [amps[(1, k)] for k in range(3)] == pytest.approx([np.sqrt(0.375), 0.5, np.sqrt(0.375)])
    assert stationary_coin_states(P)[1].norm() == pytest.approx(1.0, abs=1e-12)


def test_operator_structure(rng):
    op = walk_operator(random_chain(rng, 3))
    n = op.U.shape[0]
    assert np.max(np.abs(op.R @ op.R - np.eye(n))) < 1e-12
    assert np.max(np.abs(op.S @ op.S - np.eye(n))) < 1e-12
    assert np.max(np.abs(op.U.T @ op.U - np.eye(n))) < 1e-12
    for j in range(3):
        assert np.allclose(op.U @ op.phi(j), op.psi(j))


def test_identity_chain():
    op = walk_operator(np.eye(3))
    for j in range(3):
        assert np.allclose(op.U @ op.phi(j), op.phi(j))
        assert one_step_distribution(op, j) == pytest.approx(np.eye(3)[j])
    assert np.allclose(np.abs(np.abs(np.linalg.eigvals(op.U).real) - 1), 0, atol=1e-12)


def test_one_step_examples(rng):
    walk = WalkSpec.constant(0.75, 0.3, 0.3)
    op = halfline_blocks(walk, 4)
    assert one_step_distribution(op, 0)[:2] == pytest.approx([0.25, 0.75], abs=1e-14)
    P = np.array([[0.3, 0.7], [0.7, 0.3]])
    for j in range(2):
        assert np.max(np.abs(one_step_distribution(walk_operator(P), j) - P[j])) < 1e-14


def test_discriminant_examples(rng):
    P = np.array([[0.2, 0.5, 0.3], [0.5, 0.1, 0.4], [0.3, 0.4, 0.3]])
    assert np.allclose(discriminant(P), P)
    lam = np.linalg.eigvalsh(discriminant(random_chain(rng, 4)))
    assert lam.min() >= -1 - 1e-12 and lam.max() <= 1 + 1e-12
    D = halfline_blocks(EXAMPLE, 6).D
    assert np.allclose(np.diag(D, 1)[1:], 0.375) and np.allclose(np.diag(D, 2), 0)


def test_lift_examples():
    assert lift_spectrum(1) == (1, 1)
    assert lift_spectrum(0) == (1j, -1j)
    mp, mm = lift_spectrum(0.5)
    assert mp == pytest.approx(0.5 + 1j * np.sqrt(3) / 2) and mm == pytest.approx(np.conj(mp))
    with pytest.raises(ValueError):
        lift_spectrum(1.5)


def test_verify_lifting_examples():
    rep = verify_lifting(np.eye(3))
    assert rep["passed"] and rep["n_pm1"] == 9
    P = transition_matrix(WalkSpec.constant(0.5, 0.3, 0.4), 3)
    P[-1] /= P[-1].sum()
    assert verify_lifting(P)["passed"]
    assert verify_lifting(halfline_blocks(EXAMPLE, 16))["passed"]


def test_halfline_layout_and_blocks():
    basis = halfline_basis(2)
    assert basis == [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]
    R1, degenerate = coin_block(0.375, 0.375, 0.25)
    assert not degenerate
    assert R1[0] == pytest.approx([2 * 0.375 - 1, 2 * np.sqrt(0.09375), 2 * 0.375])
    R0, degenerate = coin_block(0.0, 0.0, 1.0, origin=True)
    assert np.allclose(R0, np.diag([1, -1])) and degenerate


def test_discriminant_is_jacobi(rng):
    walk = random_walk(rng, 40)
    op = halfline_blocks(walk, 32)
    assert np.max(np.abs(op.D - jacobi_matrix(walk, 33).dense())) < 1e-14


def test_cmv_extraction_free():
    walk = WalkSpec.constant(1.0, 0.5, 0.5)
    e, alphas = cmv_basis_extraction(walk, 4)
    assert np.allclose(alphas, 0)
    basis = halfline_basis(4)
    for k in range(4):
        assert basis[int(np.argmax(np.abs(e[:, 2 * k])))] == (k, k + 1)
        assert basis[int(np.argmax(np.abs(e[:, 2 * k + 1])))] == (k + 1, k)
        assert np.max(np.abs(e[:, 2 * k])) == pytest.approx(1)


def test_cmv_extraction_matches_geronimus(rng):
    _, alphas = cmv_basis_extraction(EXAMPLE, 8)
    assert np.allclose(alphas, [0.5, -0.5] * 8 + [0.5], atol=1e-10)
    walk = random_walk(rng, 20)
    e, alphas = cmv_basis_extraction(walk, 12)
    assert alphas[0] == pytest.approx(walk.at(0)[2])
    assert np.max(np.abs(alphas - walk_to_alphas(walk, 25))) < 1e-12
    assert np.allclose(e.T @ e, np.eye(25), atol=1e-12)


def test_first_cmv_vectors(rng):
    walk = random_walk(rng, 10, r_min=0.05)
    e, alphas = cmv_basis_extraction(walk, 3)
    a0 = alphas[0]
    idx = {b: i for i, b in enumerate(halfline_basis(3))}
    e0 = np.zeros(e.shape[0])
    e0[idx[(0, 0)]], e0[idx[(0, 1)]] = np.sqrt(a0), np.sqrt(1 - a0)
    e1 = np.zeros(e.shape[0])
    e1[idx[(0, 0)]], e1[idx[(0, 1)]], e1[idx[(1, 0)]] = np.sqrt(a0 * (1 - a0)), -a0, 1
    assert np.allclose(e[:, 0], e0) and np.allclose(e[:, 1], e1 / np.sqrt(1 + a0))


def test_complement_example():
    walk = WalkSpec.constant(0.5, 0.375, 0.375)
    sigma = complement_basis(walk, 3)[0].amplitudes
    got = [sigma[k] for k in [(0, 0), (0, 1), (1, 0), (1, 1)]]
    expected = [np.sqrt(0.125), -np.sqrt(0.125), -np.sqrt(0.125), np.sqrt(0.1875)]
    assert np.allclose(got, expected)
    op = halfline_blocks(walk, 3)
    v = complement_basis(walk, 3)[0].vector(op.index)
    assert abs(op.phi(0) @ v) < 1e-15


def test_complement_properties(rng):
    walk = random_walk(rng, 20, r_min=0.05)
    op = halfline_blocks(walk, 16)
    V = np.array([s.vector(op.index) for s in complement_basis(walk, 16, normalize=True)]).T
    assert np.max(np.abs(op.T.T @ V)) < 1e-12
    assert np.max(np.abs((op.S @ op.T).T @ V)) < 1e-12
    assert np.max(np.abs(op.R @ V + V)) < 1e-12 and np.max(np.abs(op.S @ V - V)) < 1e-12
    assert np.allclose(np.linalg.norm(V, axis=0), 1)
    # together with the CMV basis they span everything except the trailing pair
    e, _ = cmv_basis_extraction(walk, 16)
    full = np.hstack([e, V])
    assert np.linalg.matrix_rank(full, tol=1e-10) == e.shape[1] + V.shape[1]


def test_complement_requires_positive_r():
    with pytest.raises(SpecError):
        complement_basis(WalkSpec.constant(1.0, 0.5, 0.5), 4)


def test_orthonormal_phi_psi_pairs(rng):
    walk = random_walk(rng, 20)
    op = halfline_blocks(walk, 10)
    Phi = op.T
    Psi = op.S @ op.T
    assert np.allclose(Phi.T @ Phi, np.eye(11)) and np.allclose(Psi.T @ Psi, np.eye(11))
