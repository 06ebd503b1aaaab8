from __future__ import annotations

import numpy as np
import pytest

from jackson.errors import DomainError
from jackson.periodic import PeriodicFunction, TrigPoly, build_family, grid, sawtooth
from jackson.smoothness import (binomial_weights, difference, difference_recursive, modulus,
                                modulus_curve, step_grid)

COS = TrigPoly.from_terms({1: 0.5}, "cos")


def brute_modulus(f, m, delta, N, N_h):
    """Direct loop over (x, h): independent of the spectral route."""
    x = grid(N)
    best = 0.0
    for h in step_grid(delta, N_h):
        vals = sum(w * f(x - m * h / 2 + i * h) for i, w in enumerate(binomial_weights(m)))
        best = max(best, np.max(np.abs(vals)))
    return best


def test_binomial_weights():
    assert binomial_weights(2).tolist() == [1, -2, 1]
    assert binomial_weights(3).tolist() == [-1, 3, -3, 1]
    assert binomial_weights(4).sum() == 0


def test_difference_examples():
    f = PeriodicFunction(lambda x: np.ones_like(x), "one")
    assert difference(f, 3, 0.4, 0.1) == 0.0
    x = np.linspace(-1, 1, 7)
    # Delta_h^2 cos = -4 sin^2(h/2) cos
    assert np.allclose(difference(COS, 2, 0.3, x), -4 * np.sin(0.15) ** 2 * np.cos(x))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_difference_recursive_agrees(m):
    f = build_family("random", degree=10, seed=m)
    x = np.linspace(-np.pi, np.pi, 33)
    assert np.allclose(difference(f, m, 0.21, x), difference_recursive(f, m, 0.21, x), atol=1e-12)


def test_step_grid_strict():
    hs = step_grid(0.5, 16)
    assert hs[0] == 0.0 and hs[-1] < 0.5 and hs.size == 16


@pytest.mark.parametrize("delta", [0.1, 0.7, 2.0, 3.0])
def test_modulus_closed_forms(delta):
    assert abs(modulus(COS, 1, delta) - 2 * np.sin(delta / 2)) < 1e-10
    assert abs(modulus(COS, 2, delta) - 2 * (1 - np.cos(delta))) < 1e-10


def test_modulus_zero_and_domain():
    assert modulus(COS, 2, 0.0) == 0.0
    assert modulus(TrigPoly.zero(3), 2, 1.0) == 0.0
    with pytest.raises(DomainError):
        modulus(COS, 2, -1.0)
    with pytest.raises(DomainError):
        modulus(COS, 0, 1.0)
    with pytest.raises(DomainError):
        modulus(COS, 1, 1.0, N_h=8)


@pytest.mark.parametrize("m", [1, 2, 4])
def test_spectral_matches_brute_force(m):
    f = sawtooth(16)
    spectral = modulus(f, m, 0.8, 256, 64, refine=False)
    generic = modulus(PeriodicFunction(f, "saw"), m, 0.8, 256, 64, refine=False)
    assert abs(spectral - brute_modulus(f, m, 0.8, 256, 64)) < 1e-12
    assert abs(spectral - generic) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3])
def test_refinement_reaches_dense_grid(m):
    f = sawtooth(16)
    coarse = modulus(f, m, 0.8, 64, 32, refine=False)
    refined = modulus(f, m, 0.8, 64, 32)
    generic = modulus(PeriodicFunction(f, "saw"), m, 0.8, 64, 32)
    dense = brute_modulus(f, m, 0.8, 2**14, 32)
    assert coarse <= refined + 1e-15
    assert abs(refined - generic) < 1e-12
    # the dense grid itself sits O(dx^2) below the supremum
    assert dense <= refined + 1e-12 and refined - dense < 1e-5


def test_modulus_curve_monotone():
    f = build_family("weierstrass", terms=6)
    c = modulus_curve(f, 2, [0.05, 0.1, 0.4, 1.0], N_x=1024, N_h=32)
    assert np.all(np.diff(c.values) >= 0)
    with pytest.raises(DomainError):
        modulus_curve(f, 2, [0.5, 0.1])


def test_modulus_inequalities_small():
    f = build_family("random", degree=12, seed=4)
    norm = np.max(np.abs(f.grid_values(1024)))
    for d in (0.2, 1.0):
        for k in (1, 2):
            assert modulus(f, 2 * k, d, 1024, 64) <= 2 * modulus(f, 2 * k - 1, d, 1024, 64) * (1 + 1e-9)
        for m in (1, 2, 3):
            assert modulus(f, m, d, 1024, 64) <= 2**m * norm * (1 + 1e-9)
