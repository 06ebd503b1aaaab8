"""Best uniform approximation by trigonometric polynomials on a grid.

A multiple-exchange (Remez-type) iteration over the 2n+1 dimensional
trigonometric system on the circle.  The reference holds 2n+2 grid angles
at which the error alternates in sign cyclically.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExchangeFailure, InternalError
from .fourier import highpass_residual
from .periodic import DEFAULT_GRID, TrigPoly, check_grid_size, grid, samples, sup_norm
from .search import golden_max

MAX_ITER = 200
_ZERO_FLOOR = 1e-13


@dataclass(frozen=True)
class MinimaxResult:
    n: int
    poly: TrigPoly
    error_level: float
    reference: np.ndarray
    reference_errors: np.ndarray
    iterations: int
    converged: bool
    max_error: float
    grid: int
    grid_correction: float

    @property
    def upper_bound(self) -> float:
        """Upper bound on the continuous best-approximation error."""
        return self.max_error + self.grid_correction

    def alternations(self) -> int:
        """Cyclic sign changes of the error along the reference."""
        s = np.sign(self.reference_errors)
        return int(np.sum(s != np.roll(s, 1)))

    def certificate_ok(self, rtol: float = 1e-8) -> bool:
        e = np.abs(self.reference_errors)
        lvl = self.error_level
        return (self.alternations() == 2 * self.n + 2
                and bool(np.all((e >= lvl * (1 - rtol)) & (e <= lvl * (1 + rtol)))))


def _basis(x: np.ndarray, n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    t = np.multiply.outer(x, j)
    return np.hstack([np.ones((x.size, 1)), np.cos(t), np.sin(t)])


def _solve_reference(x: np.ndarray, fx: np.ndarray, n: int):
    A = np.hstack([_basis(x, n), ((-1.0) ** np.arange(x.size))[:, None]])
    try:
        sol = np.linalg.solve(A, fx)
    except np.linalg.LinAlgError as exc:
        raise ExchangeFailure(f"singular reference system at degree {n}") from exc
    a = np.concatenate([[sol[0]], sol[1:n + 1]])
    b = np.concatenate([[0.0], sol[n + 1:2 * n + 1]])
    return a, b, sol[-1]


def _extrema(e: np.ndarray) -> np.ndarray:
    """One index of largest |e| per cyclic run of constant sign, in cyclic order."""
    s = e >= 0
    starts = np.flatnonzero(s != np.roll(s, 1))
    if starts.size < 2:
        return np.array([int(np.argmax(np.abs(e)))])
    shift = int(starts[0])
    er = np.abs(np.roll(e, -shift))
    seg = np.zeros(e.size, dtype=int)
    seg[starts - shift] = 1
    seg = np.cumsum(seg) - 1
    order = np.lexsort((-er, seg))
    _, first = np.unique(seg[order], return_index=True)
    return (order[first] + shift) % e.size


def _reduce(idx: np.ndarray, mag: np.ndarray, target: int) -> np.ndarray:
    """Drop adjacent pairs, smallest first, until ``target`` alternating points remain."""
    K = idx.size
    prev = np.roll(np.arange(K), 1)
    nxt = np.roll(np.arange(K), -1)
    alive = np.ones(K, dtype=bool)
    heap = [(float(mag[p]), p) for p in range(K)]
    heapq.heapify(heap)
    count = K
    while count > target:
        _, p = heapq.heappop(heap)
        if not alive[p]:
            continue
        a, b = prev[p], nxt[p]
        q = a if (mag[a], -a) < (mag[b], -b) else b
        for r in (p, q):
            alive[r] = False
            nxt[prev[r]] = nxt[r]
            prev[nxt[r]] = prev[r]
        count -= 2
    return np.sort(idx[alive])


def _exchange(e: np.ndarray, ref: np.ndarray, target: int) -> np.ndarray:
    ext = _extrema(e)
    if ext.size >= target:
        return _reduce(ext, np.abs(e[ext]), target)
    # too few sign changes: single exchange of the global maximum
    p = int(np.argmax(np.abs(e)))
    if p in ref:
        return ref
    pos = int(np.searchsorted(ref, p))
    left = ref[(pos - 1) % ref.size]
    out = ref.copy()
    out[(pos - 1) % ref.size if np.sign(e[left]) == np.sign(e[p]) else pos % ref.size] = p
    return np.sort(out)


def _polish(f, fx, xgrid, ref_x, n, tol, rounds: int = 20):
    """Move reference points off-grid onto nearby local extrema of the error and re-level."""
    spacing = xgrid[1] - xgrid[0]
    xr = ref_x.copy()
    for _ in range(rounds):
        a, b, E = _solve_reference(xr, np.asarray(f(xr), dtype=float), n)
        p = TrigPoly.from_real(a, b, f"minimax_{n}")
        sign = np.sign(E) * (-1.0) ** np.arange(xr.size)
        err = lambda t: (np.asarray(f(t), dtype=float) - p(t)) * sign  # noqa: E731
        moved = golden_max(err, xr - spacing, xr + spacing)
        if np.any(np.diff(moved) <= 0):
            return None
        a, b, E = _solve_reference(moved, np.asarray(f(moved), dtype=float), n)
        p = TrigPoly.from_real(a, b, f"minimax_{n}")
        e_grid = fx - p.grid_values(xgrid.size)
        e_ref = np.asarray(f(moved), dtype=float) - p(moved)
        emax = max(float(np.max(np.abs(e_grid))), float(np.max(np.abs(e_ref))))
        done = np.max(np.abs(moved - xr)) <= 1e-15 * math.pi
        xr = moved
        if emax - abs(E) <= tol * emax and done:
            return p, abs(E), xr, e_ref, e_grid
    if emax - abs(E) <= tol * emax:
        return p, abs(E), xr, e_ref, e_grid
    return None


def _grid_correction(f, n: int, N: int, max_error: float) -> float:
    # Bernstein: ||g|| <= grid max / (1 - pi D / N) for deg g <= D
    if not isinstance(f, TrigPoly):
        return math.inf
    D = max(f.effective_degree, n)
    r = math.pi * D / N
    return max_error * r / (1 - r) if r < 1 else math.inf


def best_approximation(f, n: int, N: int = DEFAULT_GRID, tol: float = 1e-10,
                       max_iter: int = MAX_ITER, polish: bool = True) -> MinimaxResult:
    """Discrete minimax approximation of ``f`` by degree-n trig polynomials.

    ``error_level`` is the levelled reference error: a lower bound for the
    best error on the grid and hence for the continuous ``E_n(f)``.
    ``upper_bound`` adds a Bernstein grid correction to the grid maximum of
    the final error (finite only for trigonometric polynomial inputs).
    Non-convergence within ``max_iter`` returns the last iterate flagged.

    With ``polish`` the converged grid reference is moved onto nearby local
    extrema of the continuous error and re-levelled; the polished result is
    kept only when it raises the level and still satisfies ``tol``.
    """
    if n < 0:
        raise DomainError("degree must be >= 0")
    N = check_grid_size(N)
    if N < max(64, 16 * (n + 1)):
        raise DomainError(f"grid N={N} too coarse for degree {n}; need >= {max(64, 16 * (n + 1))}")
    if not 1e-14 <= tol <= 1e-6:
        raise DomainError(f"tol must lie in [1e-14, 1e-6], got {tol}")
    x = grid(N)
    fx = samples(f, N)
    scale = max(1.0, float(np.max(np.abs(fx))))
    target = 2 * n + 2
    ref = np.unique(np.round(np.arange(target) * N / target).astype(int))
    converged = False
    it = 0
    while True:
        if ref.size != target:
            raise ExchangeFailure(f"reference has {ref.size} distinct angles, need {target}")
        a, b, E = _solve_reference(x[ref], fx[ref], n)
        p = TrigPoly.from_real(a, b, f"minimax_{n}")
        e = fx - p.grid_values(N)
        emax = float(np.max(np.abs(e)))
        it += 1
        if emax <= _ZERO_FLOOR * scale or emax - abs(E) <= tol * emax:
            converged = True
            break
        if it >= max_iter:
            break
        new = _exchange(e, ref, target)
        if np.array_equal(new, ref):
            # reference fixed while levels still differ: cannot improve
            break
        ref = new
    level, ref_x, ref_e = abs(E), x[ref], e[ref]
    if polish and converged and emax > _ZERO_FLOOR * scale:
        out = _polish(f, fx, x, ref_x, n, tol)
        if out is not None and out[1] >= level:
            p, level, ref_x, ref_e, e_grid = out
            emax = max(float(np.max(np.abs(e_grid))), float(np.max(np.abs(ref_e))))
    return MinimaxResult(
        n=n, poly=p, error_level=level, reference=ref_x, reference_errors=ref_e,
        iterations=it, converged=converged, max_error=emax, grid=N,
        grid_correction=_grid_correction(f, n, N, emax),
    )


def default_split(n: int) -> tuple[int, int]:
    """``(k, m)`` maximising ``km`` subject to ``(k+1)m - 1 <= n``, ``k >= 1``, ``m >= 2``."""
    best = None
    for m in range(2, (n + 1) // 2 + 1):
        k = (n + 1) // m - 1
        if k >= 1 and (best is None or k * m > best[0] * best[1]):
            best = (k, m)
    if best is None:
        raise DomainError(f"no Vallee-Poussin split fits degree {n}")
    return best


def en_upper_via_vp(f, n: int, k: int | None = None, m: int | None = None,
                    N: int = DEFAULT_GRID, minimax: MinimaxResult | None = None) -> float:
    """Grid sup of ``f - v_{k,m} f``: an upper bound for ``E_n(f)``.

    ``v_{k,m} f`` has degree ``(k+1)m - 1``, which must not exceed n.
    When a minimax result computed on the same grid is supplied, its level
    must not exceed this bound.
    """
    if k is None or m is None:
        k, m = default_split(n)
    if k < 1 or m < 2 or (k + 1) * m - 1 > n:
        raise DomainError(f"invalid split k={k}, m={m} for n={n}: need (k+1)m-1 <= n")
    value = sup_norm(highpass_residual(f, k, m, N), N)
    if minimax is not None and minimax.error_level > value + 1e-8:
        raise InternalError(f"E_n level {minimax.error_level} exceeds upper bound {value}")
    return value
