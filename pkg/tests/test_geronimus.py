import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_walk
from specquant.coeffs import VerblunskySpec, WalkSpec, circular_jacobi_alpha
from specquant.errors import NotQuantizableError
from specquant.geronimus import (
    walk_rows_from_alphas,
    alphas_to_walk,
    correspondence,
    naive_quantization,
    offdiag_from_alphas,
    restriction_identity_check,
    segment_polys_from_circle,
    szego_measure_forward,
    szego_weight_forward,
    szego_weight_inverse,
    walk_to_alphas,
)
from specquant.opuc import CircleMeasure
from specquant.periodic import (
    chebyshev_u,
    constant_walk_measure,
    two_periodic_circle_measure,
    two_periodic_weight,
)
from specquant.walks import jacobi_matrix, pi_constants, walk_polynomials


def test_free_case():
    w = alphas_to_walk(np.zeros(9))
    p, q, r = w.arrays(5)
    assert p[0] == 1 and r[0] == 0
    assert np.allclose(p[1:], 0.5) and np.allclose(q[1:], 0.5) and np.allclose(r, 0)
    assert np.allclose(walk_to_alphas(WalkSpec.constant(1, 0.5, 0.5), 12), 0)


def test_origin_read_off(rng):
    a = rng.uniform(-0.9, 0.9, 5)
    a[0] = abs(a[0])
    p, q, r = walk_rows_from_alphas(a)
    assert (q[0], r[0], p[0]) == pytest.approx((0, a[0], 1 - a[0]))


def test_two_periodic_walk():
    a, b = 0.5, -0.5
    p, q, r = alphas_to_walk([a, b] * 5 + [a]).arrays(6)
    assert q[1] == pytest.approx(0.5 * 1.5 * 0.5)
    assert (p[1], q[1], r[1]) == pytest.approx((0.375, 0.375, 0.25))
    assert (p[3], q[3], r[3]) == pytest.approx((0.5 * (1 - a) * (1 - b), 0.5 * (1 + a) * (1 + b), -a * b))


@pytest.mark.parametrize("a,b", [(0.5, -0.5), (0.3, -0.2), (0.6, 0.0), (0.1, -0.8)])
def test_constant_walk_gives_two_periodic(a, b):
    walk = WalkSpec.constant(1 - a, 0.5 * (1 - a) * (1 - b), 0.5 * (1 + a) * (1 + b))
    assert np.allclose(walk_to_alphas(walk, 21), [a, b] * 10 + [a], atol=1e-12)


def test_legendre_walk():
    walk = WalkSpec.jacobi(0.0, 0.0)
    ref = circular_jacobi_alpha(np.arange(41.0), 0.0, 0.0)
    assert np.max(np.abs(walk_to_alphas(walk, 41) - ref)) < 1e-12


def test_non_quantizable_index():
    with pytest.raises(NotQuantizableError) as info:
        alphas_to_walk([0.5, 0.5, -0.5])
    assert info.value.index == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_every_walk_is_quantizable(seed):
    walk = random_walk(np.random.default_rng(seed), 25)
    a = walk_to_alphas(walk, 49)
    assert np.all(np.abs(a) < 1)


def test_offdiag_examples():
    z = np.zeros(12)
    assert offdiag_from_alphas(z, 0) == pytest.approx(0.5 * np.sqrt(2))
    assert offdiag_from_alphas(z, 3) == pytest.approx(0.5)
    assert offdiag_from_alphas([0.5, -0.5] * 4, 1) == pytest.approx(0.375)


def test_offdiag_is_jacobi(rng):
    walk = random_walk(rng, 20)
    a = walk_to_alphas(walk, 39)
    J = jacobi_matrix(walk, 19)
    s = [offdiag_from_alphas(a, k) for k in range(18)]
    assert np.allclose(s, J.offdiag[:18], atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-0.95, 0.95), min_size=3, max_size=25))
def test_round_trip_property(vals):
    a = np.array(vals)
    try:
        walk = alphas_to_walk(a)
    except NotQuantizableError:
        return
    n = a.shape[0] if a.shape[0] % 2 else a.shape[0] - 1
    back = walk_to_alphas(walk, n)
    assert np.max(np.abs(back - a[:n])) < 1e-10


def test_naive_quantization():
    a = np.array([0.0, 0.3, 0.0, -0.2, 0.0, 0.6, 0.0])
    assert alphas_to_walk(a) == naive_quantization(a)
    assert naive_quantization(np.zeros(7)) == alphas_to_walk(np.zeros(7))
    b = np.array([0.2, 0.3, -0.1, 0.4, 0.25])
    p, q, _ = naive_quantization(b).arrays(2)
    assert q[1] / p[0] == pytest.approx((1 + b[1]) / 2)


def test_correspondence_document():
    doc = correspondence([0.5, -0.5, 0.5, -0.5, 0.5]).to_json()
    assert doc["alphas"] == [0.5, -0.5, 0.5, -0.5, 0.5]
    assert doc["walk"]["p"] == pytest.approx([0.5, 0.375, 0.375])
    assert set(doc) >= {"alphas", "walk", "s"}


def test_szego_map_uniform():
    x = np.linspace(-0.9, 0.9, 11)
    u = szego_weight_forward(lambda t: np.ones_like(t), x)
    assert np.allclose(u, 1 / (np.pi * np.sqrt(1 - x * x)))


def test_szego_map_inverse(rng):
    w = lambda t: two_periodic_weight(0.3, -0.4, t)  # noqa: E731
    u = lambda x: szego_weight_forward(w, x)  # noqa: E731
    th = rng.uniform(0.05, np.pi - 0.05, 20)
    assert np.allclose(szego_weight_inverse(u, th), w(th), atol=1e-10)


@pytest.mark.parametrize("a,b", [(0.5, -0.5), (0.3, -0.2), (0.6, -0.2), (0.0, -0.7)])
def test_szego_map_two_periodic_to_walk(a, b):
    circle = two_periodic_circle_measure(a, b)
    seg = szego_measure_forward(circle)
    walk = constant_walk_measure(1 - a, 0.5 * (1 - a) * (1 - b), 0.5 * (1 + a) * (1 + b))
    x = np.linspace(-0.99, 0.99, 200)
    assert np.max(np.abs(seg.weight(x) - walk.weight(x))) < 1e-8
    assert len(seg.point_masses) == len(walk.point_masses)
    for (x1, m1), (x2, m2) in zip(sorted(seg.point_masses), sorted(walk.point_masses)):
        assert x1 == pytest.approx(x2, abs=1e-10) and m1 == pytest.approx(m2, abs=1e-10)


def test_szego_map_rejects_asymmetric():
    circle = CircleMeasure(lambda t: 1 + 0.5 * np.sin(t))
    with pytest.raises(Exception):
        szego_measure_forward(circle)


def test_segment_polys(rng):
    x = rng.uniform(-1, 1, 9)
    spec = VerblunskySpec.constant(0)
    assert np.allclose(segment_polys_from_circle(spec, 0, x), 1)
    free = WalkSpec.constant(1, 0.5, 0.5)
    ref = np.sqrt(pi_constants(free, 1)[1]) * walk_polynomials(free, 1, x)[1]
    assert np.allclose(segment_polys_from_circle(spec, 1, x), ref)
    a, b = 0.4, -0.3
    spec = VerblunskySpec.two_periodic(a, b)
    walk = WalkSpec.constant(1 - a, 0.5 * (1 - a) * (1 - b), 0.5 * (1 + a) * (1 + b))
    Q = walk_polynomials(walk, 8, x)
    pi = pi_constants(walk, 8)
    for k in range(9):
        assert np.allclose(segment_polys_from_circle(spec, k, x), np.sqrt(pi[k]) * Q[k], atol=1e-12)


def test_segment_polys_chebyshev_form(rng):
    # for k > 0 the segment polynomials are sqrt(2/(1-b)) times the symmetric Chebyshev form
    a, b = 0.4, -0.3
    spec = VerblunskySpec.two_periodic(a, b)
    x = rng.uniform(-1, 1, 9)
    p, q = 0.5 * (1 - a) * (1 - b), 0.5 * (1 + a) * (1 + b)
    r = -a * b
    y = (x - r) / (2 * np.sqrt(p * q))
    for k in range(1, 7):
        P = chebyshev_u(k, y) + (np.sqrt(p / q) * (x - a) / (1 - a) - 2 * y) * chebyshev_u(k - 1, y)
        # orthonormal p_k = sqrt(pi_k) Q_k with Q_k = (q/p)^{k/2} P_k
        pi_k = (1 - a) / q * (p / q) ** (k - 1)
        target = np.sqrt(pi_k) * (q / p) ** (k / 2) * P
        assert np.allclose(segment_polys_from_circle(spec, k, x), target, atol=1e-12)
        assert np.allclose(np.sqrt(pi_k) * (q / p) ** (k / 2), np.sqrt(2 / (1 - b)))


def test_restriction_identity():
    rep = restriction_identity_check(np.zeros(20), 15)
    assert rep["passed"]
    assert np.allclose(rep["r"], 0) and rep["s"][0] == pytest.approx(0.5 * np.sqrt(2))
    assert np.allclose(rep["s"][1:], 0.5)
    rep = restriction_identity_check([0.5, -0.5] * 10, 15)
    assert rep["passed"] and np.allclose(rep["r"][1:], 0.25) and np.allclose(rep["s"][1:], 0.375)
    assert rep["m_plus_residual"] < 1e-12


def test_restriction_identity_random(rng):
    walk = random_walk(rng, 30)
    rep = restriction_identity_check(walk_to_alphas(walk, 41), 31)
    assert rep["passed"] and rep["max_residual"] < 1e-12
