import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specquant.coeffs import (
    VerblunskySpec,
    WalkSpec,
    binomial,
    circular_jacobi_alpha,
    jacobi_poly_eval,
    jacobi_walk_coeffs,
    spec_from_json,
    verblunsky_at,
)
from specquant.errors import SpecError


def test_verblunsky_examples():
    assert verblunsky_at(VerblunskySpec.constant(0), 5) == 0
    assert verblunsky_at(VerblunskySpec.two_periodic(0.5, -0.5), 3) == -0.5
    assert verblunsky_at(VerblunskySpec.circular_jacobi(0, 0), 1) == pytest.approx(-1 / 3, abs=1e-15)


def test_sentinel_minus_one_is_implied():
    spec = VerblunskySpec.from_list([0.1, 0.2])
    assert spec.at(-1) == -1
    assert spec.values(2).shape == (2,)


def test_circular_jacobi_examples():
    assert circular_jacobi_alpha(0, 0, 0) == 0
    assert circular_jacobi_alpha(3, 0, 0) == pytest.approx(-1 / 5, abs=1e-15)
    for n in range(0, 20, 2):
        assert circular_jacobi_alpha(n, 0.7, 0.7) == pytest.approx(0.0, abs=1e-15)
    for n in range(1, 20, 2):
        assert circular_jacobi_alpha(n, 0, 0) == pytest.approx(-1 / (n + 2), abs=1e-15)


def test_jacobi_walk_examples():
    c = jacobi_walk_coeffs(1, 0, 0)
    assert (c.p, c.r, c.q) == pytest.approx((2 / 3, 0, 1 / 3), abs=1e-15)
    c = jacobi_walk_coeffs(0, 0, 0)
    assert (c.p, c.r, c.q) == pytest.approx((1, 0, 0), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 60), st.floats(-0.9, 3.0), st.floats(0.0, 3.0))
def test_jacobi_walk_stochastic(n, a, extra):
    b = max(abs(a), a + extra) if a != 0 else extra
    c = jacobi_walk_coeffs(n, a, b)
    assert c.p + c.q + c.r == pytest.approx(1.0, abs=1e-12)
    assert c.p > 0 and c.r >= -1e-14


def _jacobi_series(n, a, b, x):
    # P_n^{(a,b)}(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
    return sum(binomial(n + a, n - s) * binomial(n + b, s)
               * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s) for s in range(n + 1))


@pytest.mark.parametrize("n,a,b,x", [(4, 0, 0, 0.3), (7, 0.5, 1.5, -0.4), (10, 0.3, 1.2, 0.9)])
def test_jacobi_poly_series_oracle(n, a, b, x):
    assert jacobi_poly_eval(n, a, b, x) == pytest.approx(_jacobi_series(n, a, b, x), abs=1e-12)


@pytest.mark.parametrize("a,b", [(0, 0), (0.5, 0.5), (0.3, 1.2)])
def test_jacobi_poly_endpoint(a, b):
    for n in range(8):
        assert jacobi_poly_eval(n, a, b, 1.0) == pytest.approx(binomial(a + n, n), rel=1e-12)
    assert jacobi_poly_eval(0, a, b, 0.37) == 1


def test_binomial_matches_math_comb():
    for x in range(10):
        for n in range(x + 1):
            assert binomial(x, n) == math.comb(x, n)


def test_verblunsky_validation():
    with pytest.raises(SpecError):
        VerblunskySpec.constant(1.2)
    with pytest.raises(SpecError):
        VerblunskySpec.from_list([0.1, 1.0])
    spec = VerblunskySpec.from_list([0.1, 1.0], terminal=True)
    assert spec.at(1) == 1


def test_walk_validation():
    with pytest.raises(SpecError):
        WalkSpec.from_lists([0.5, 0.5], [0.0, 0.5], [0.5, 0.5])
    with pytest.raises(SpecError):
        WalkSpec.constant(0.5, 0.0, 0.5)
    w = WalkSpec.constant(0.5, 0.375, 0.375)
    assert w.at(0) == (0.5, 0.0, 0.5)
    assert w.at(3) == (0.375, 0.375, 0.25)


@pytest.mark.parametrize("spec", [
    VerblunskySpec.constant(0.3 - 0.1j),
    VerblunskySpec.two_periodic(0.5, -0.5),
    VerblunskySpec.periodic([0.1, 0.2j, -0.3]),
    VerblunskySpec.circular_jacobi(0.3, 1.2),
    VerblunskySpec.from_list([0.1, 0.2], terminal=False),
    WalkSpec.constant(0.5, 0.2, 0.4),
    WalkSpec.periodic(0.5, [0.3, 0.2], [0.3, 0.4], [0.4, 0.4]),
    WalkSpec.jacobi(0.0, 0.0),
    WalkSpec.from_lists([0.5, 0.3], [0.0, 0.3], [0.5, 0.4]),
])
def test_json_round_trip(spec):
    doc = json.loads(json.dumps(spec.to_json()))
    again = spec_from_json(doc)
    assert again == spec
    assert again.to_json() == spec.to_json()
