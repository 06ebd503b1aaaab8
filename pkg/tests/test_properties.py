"""Property-based checks of the invariants each module promises."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from jackson.constants import favard
from jackson.fourier import fejer, partial_sum, vallee_poussin
from jackson.kernels import WOperatorSpec, make_kernel
from jackson.minimax import best_approximation
from jackson.periodic import eval_trigpoly, grid, random_highpass, random_poly
from jackson.smoothness import modulus
from jackson.verify import RunConfig, TheoremReport, check_theorem2

SETTINGS = settings(max_examples=25, deadline=None)
seeds = st.integers(0, 2**63 - 1)


def poly(seed, degree):
    return random_poly(degree, seed=seed)


@SETTINGS
@given(seeds, st.integers(0, 12))
def test_conjugate_symmetric_evaluates_real(seed, degree):
    tau = poly(seed, degree)
    x = np.random.default_rng(seed).uniform(-10, 10, 50)
    assert np.allclose(eval_trigpoly(tau, x), tau(x), atol=1e-12)


@SETTINGS
@given(seeds, st.integers(1, 40), st.sampled_from([16, 64, 256]))
def test_grid_values_exact(seed, degree, N):
    tau = poly(seed, degree)
    assert np.allclose(tau.grid_values(N), tau(grid(N)), atol=1e-11)


@SETTINGS
@given(seeds, st.integers(1, 32))
def test_grid_sup_within_bernstein_margin(seed, degree):
    # grid max G over N >= 8n points satisfies ||tau|| <= G / (1 - pi n / N)
    tau = poly(seed, degree)
    N = 8 * 2 ** math.ceil(math.log2(max(degree, 2)))
    G = np.max(np.abs(tau.grid_values(N)))
    dense = np.max(np.abs(tau.grid_values(2**18)))
    assert G <= dense + 1e-12
    assert dense <= G / (1 - math.pi * degree / N) + 1e-12


@SETTINGS
@given(seeds, st.integers(1, 4), st.floats(0.05, 1.5))
def test_modulus_inequalities(seed, k, delta):
    f = poly(seed, 10)
    N, Nh = 512, 32
    w = {m: modulus(f, m, delta, N, Nh) for m in (2 * k - 1, 2 * k)}
    assert w[2 * k] <= 2 * w[2 * k - 1] * (1 + 1e-9) + 1e-12
    norm = np.max(np.abs(f.grid_values(N)))
    assert w[2 * k] <= 2 ** (2 * k) * norm * (1 + 1e-9)


@SETTINGS
@given(seeds, st.integers(1, 3), st.floats(0.05, 1.0), st.floats(1.0, 2.0))
def test_modulus_monotone_in_delta(seed, m, delta, factor):
    f = poly(seed, 8)
    small = modulus(f, m, delta, 512, 33)
    large = modulus(f, m, delta * factor, 512, 33)
    # step grids differ, so allow the refinement gap
    assert small <= large + 2**m * 1e-2 * np.sum(np.abs(f.coeffs))


@SETTINGS
@given(seeds, st.integers(1, 4), st.integers(2, 5))
def test_vallee_poussin_reproduces(seed, k, m):
    tau = poly(seed, k * m)
    v = vallee_poussin(tau, k, m)
    assert np.max(np.abs(v.padded(k * m) - tau.coeffs)) < 1e-12


@SETTINGS
@given(seeds, st.integers(0, 10))
def test_fejer_is_average_of_partial_sums(seed, j):
    tau = poly(seed, 12)
    avg = sum(partial_sum(tau, i).padded(j) for i in range(j + 1)) / (j + 1)
    assert np.allclose(fejer(tau, j).coeffs, avg, atol=1e-13)


@SETTINGS
@given(st.integers(1, 6), st.floats(0.01, 0.5))
def test_kernel_invariants(s, h):
    if s * h >= math.pi:
        return
    spec = make_kernel(h, s)
    x = np.linspace(0, s * h * 1.1, 500)
    assert abs(spec.integral() - 1) < 1e-12
    assert np.array_equal(spec(x[1:]), spec(-x[1:]))
    assert spec(x).min() >= 0


@SETTINGS
@given(st.integers(1, 12))
def test_w_weights_sum_to_zero(k):
    assert abs(WOperatorSpec(0.01, k, 1).weights.sum()) < 1e-12


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(1, 6), st.floats(-3, 3).filter(lambda c: abs(c) > 0.1))
def test_best_approximation_invariances(seed, n, c):
    f = poly(seed, n + 6)
    base = best_approximation(f, n, 1024).error_level
    shifted = best_approximation(f + poly(seed + 1, n), n, 1024).error_level
    scaled = best_approximation(f.scaled(c), n, 1024).error_level
    assert abs(shifted - base) <= 1e-7 * max(base, 1e-12)
    assert abs(scaled - abs(c) * base) <= 1e-7 * max(abs(c) * base, 1e-12)


@SETTINGS
@given(st.integers(1, 40))
def test_favard_range(m):
    assert 1 <= favard(m) <= math.pi / 2 + 1e-15


@SETTINGS
@given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 1e-3))
def test_report_pass_predicate(lhs, rhs, slack):
    r = TheoremReport("1", "f", {}, 1, 1, 2, lhs, rhs, slack, 16)
    assert r.passed == (lhs <= rhs * (1 + slack))
    assert r.to_dict()["pass"] == r.passed


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(2, 12), st.integers(1, 3), st.integers(1, 12))
def test_theorem2_random_highpass(seed, n, k, width):
    if n < 2 * k:
        return
    g = random_highpass(n, width=width, seed=seed)
    assert check_theorem2(g, n, k, RunConfig(grid=1024, step_grid=64)).passed
