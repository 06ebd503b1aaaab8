"""Centered finite differences and moduli of smoothness on the circle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DomainError, EvaluationError
from .periodic import DEFAULT_GRID, TrigPoly, check_grid_size, grid
from .search import golden_max

DEFAULT_STEP_GRID = 512
_BATCH_ELEMS = 1 << 22
_CANDIDATES = 4
_SUBGRID = 64


def binomial_weights(m: int) -> np.ndarray:
    """``(-1)^(m-i) C(m, i)`` for ``i = 0..m``."""
    return np.array([(-1) ** (m - i) * comb(m, i) for i in range(m + 1)], dtype=float)


@dataclass(frozen=True)
class DifferenceSpec:
    order: int
    step: float

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("difference order must be >= 1")
        if not np.isfinite(self.step):
            raise DomainError("difference step must be finite")

    @property
    def weights(self) -> np.ndarray:
        return binomial_weights(self.order)

    @property
    def offsets(self) -> np.ndarray:
        m, h = self.order, self.step
        return -(m / 2) * h + h * np.arange(m + 1)


def difference(f, m: int, h: float, x):
    """Centered m-th difference ``sum_i (-1)^(m-i) C(m,i) f(x - (m/2)h + ih)``."""
    spec = DifferenceSpec(m, h)
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for w, off in zip(spec.weights, spec.offsets):
        out += w * np.asarray(f(x + off), dtype=float)
    return out if out.ndim else float(out)


def difference_recursive(f, m: int, h: float, x):
    """Same quantity through ``D^m = D^1 o D^(m-1)`` with half-step centering."""
    if m < 1:
        raise DomainError("difference order must be >= 1")
    if m == 1:
        x = np.asarray(x)
        return np.asarray(f(x + h / 2), dtype=float) - np.asarray(f(x - h / 2), dtype=float)
    inner = lambda y: difference_recursive(f, m - 1, h, y)  # noqa: E731
    return inner(np.asarray(x) + h / 2) - inner(np.asarray(x) - h / 2)


def step_grid(delta: float, N_h: int = DEFAULT_STEP_GRID) -> np.ndarray:
    """Steps ``h`` in ``[0, delta)``.

    Uniform samples, with the endpoint replaced by the largest double below
    ``delta`` so the bound ``|h| < delta`` stays strict.
    """
    if N_h < 2:
        raise DomainError("step grid needs at least two points")
    hs = np.linspace(0.0, delta, N_h)[:-1]
    return np.append(hs, np.nextafter(delta, 0.0))


def _difference_symbol(m: int, hs: np.ndarray):
    # Delta_h^m exp(ijx) = (2i sin(jh/2))^m exp(ijx)
    def mult(j):
        return (2j * np.sin(np.multiply.outer(hs, j) / 2)) ** m
    return mult


def _pointwise(f, m: int):
    """``(h, x) -> |Delta_h^m f(x)|`` on broadcast arrays, spectrally for trig polynomials."""
    if isinstance(f, TrigPoly):
        # differences annihilate the constant term
        j = f._pos.astype(float)
        c = 2.0 * f._posvals

        def value(h, x):
            h, x = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(x, dtype=float))
            sym = (2j * np.sin(np.multiply.outer(h, j) / 2)) ** m
            out = np.real(np.sum(sym * c * np.exp(1j * np.multiply.outer(x, j)), axis=-1))
            return np.abs(out)
        return value

    w = binomial_weights(m)

    def value(h, x):
        h, x = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(x, dtype=float))
        out = np.zeros(x.shape)
        for i, wi in enumerate(w):
            out += wi * np.asarray(f(x - (m / 2) * h + i * h), dtype=float)
        return np.abs(out)
    return value


def _refine(f, m: int, hs: np.ndarray, vals: np.ndarray, x: np.ndarray, floor: float) -> float:
    """Local maximisation in x around the largest grid values of each step row.

    Rows whose grid maximum cannot exceed ``floor`` after the Bernstein
    correction are skipped; without a finite bound every row is searched.
    """
    rowmax = np.max(np.abs(vals), axis=1)
    D = f.effective_degree if isinstance(f, TrigPoly) else None
    dx = x[1] - x[0]
    r = math.pi * D / x.size if D is not None else math.inf
    if r < 1:
        keep = rowmax / (1 - r) > floor
        hs, vals = hs[keep], vals[keep]
    if hs.size == 0:
        return 0.0
    value = _pointwise(f, m)
    K = min(_CANDIDATES, vals.shape[1])
    idx = np.argpartition(-np.abs(vals), K - 1, axis=1)[:, :K]
    h = np.repeat(hs, K)
    centre = x[idx.ravel()]
    # sub-grid spacing at most an eighth of the shortest period
    sub = _SUBGRID if D is None else int(min(_SUBGRID, max(2, math.ceil(8 * D * dx / math.pi))))
    t = np.linspace(-dx, dx, sub + 1)
    terms = f._pos.size if isinstance(f, TrigPoly) else 1
    step = max(1, (1 << 20) // ((sub + 1) * max(1, terms)))
    best = 0.0
    for s in range(0, h.size, step):
        hb, cb = h[s:s + step, None], centre[s:s + step, None] + t
        scan = value(hb, cb)
        peak = cb[np.arange(cb.shape[0]), np.argmax(scan, axis=1)]
        xs = golden_max(lambda z: value(hb[:, 0], z), peak - (t[1] - t[0]), peak + (t[1] - t[0]), iters=40)
        best = max(best, float(scan.max()), float(value(hb[:, 0], xs).max()))
    return best


def modulus(f, m: int, delta: float, N_x: int = DEFAULT_GRID, N_h: int = DEFAULT_STEP_GRID,
            refine: bool = True) -> float:
    """Estimate of ``omega_m(f, delta) = sup_{x, |h| < delta} |Delta_h^m f(x)|``.

    Maximises over the step grid of ``[0, delta)`` (negative steps give the
    same supremum) and, for each step, over x: first on the N_x-point grid,
    then, with ``refine``, by a dense local scan and golden-section search
    around the largest grid values.  The result is a lower bound for the
    true modulus.  Trigonometric polynomials are differenced exactly in
    coefficient space.
    """
    if not delta >= 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if m < 1:
        raise DomainError("modulus order must be >= 1")
    N_x = check_grid_size(N_x)
    if N_h < 16:
        raise DomainError("step grid must have at least 16 points")
    if delta == 0:
        return 0.0
    hs = step_grid(delta, N_h)
    x = grid(N_x)
    best = 0.0
    batch = max(1, _BATCH_ELEMS // N_x)
    for s in range(0, hs.size, batch):
        hb = hs[s:s + batch]
        if isinstance(f, TrigPoly):
            vals = f.grid_values(N_x, _difference_symbol(m, hb))
        else:
            vals = np.stack([difference(f, m, h, x) for h in hb])
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("non-finite difference value")
        best = max(best, float(np.max(np.abs(vals))))
        if refine:
            best = max(best, _refine(f, m, hb, vals, x, best))
    if not np.isfinite(best):
        raise EvaluationError("non-finite difference value")
    return best


@dataclass(frozen=True)
class ModulusCurve:
    order: int
    deltas: np.ndarray
    values: np.ndarray


def modulus_curve(f, m: int, deltas, N_x: int = DEFAULT_GRID, N_h: int = DEFAULT_STEP_GRID,
                  refine: bool = True) -> ModulusCurve:
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size and np.any(np.diff(deltas) < 0):
        raise DomainError("deltas must be sorted increasingly")
    vals = np.array([modulus(f, m, d, N_x, N_h, refine) for d in deltas])
    if vals.size:
        vals = np.maximum.accumulate(vals)
    return ModulusCurve(m, deltas, vals)
