"""Fourier coefficients on the grid, partial sums, Fejer and Vallee-Poussin means.

All means act in coefficient space with exact multipliers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalError
from .periodic import DEFAULT_GRID, PeriodicFunction, TrigPoly, check_grid_size, samples

ALIAS_RTOL = 1e-6
_GUARD_BAND = 4
_AGREE = 1e-12


class TruncationWarning(UserWarning):
    """Coefficients near the top of the analysed band are not negligible."""


@dataclass(frozen=True)
class Spectrum:
    """Conjugate-symmetric coefficients ``c_j`` for ``|j| <= J_max``."""

    coeffs: np.ndarray
    truncated: bool = False

    @property
    def J_max(self) -> int:
        return self.coeffs.size // 2

    def coef(self, j: int) -> complex:
        return complex(self.coeffs[self.J_max + j]) if abs(j) <= self.J_max else 0j

    @classmethod
    def from_trigpoly(cls, tau: TrigPoly, J_max: int | None = None) -> Spectrum:
        """Exact coefficients of ``tau`` (no sampling)."""
        J = tau.degree if J_max is None else J_max
        if J < tau.degree and np.any(tau.coeffs[:tau.degree - J] != 0):
            raise DomainError("J_max below the degree would drop nonzero coefficients")
        return cls(tau.padded(J))

    def to_trigpoly(self, label: str = "spectrum") -> TrigPoly:
        return TrigPoly(self.coeffs, label)


def analyze(f, N: int = DEFAULT_GRID, J_max: int | None = None) -> Spectrum:
    """Discrete Fourier coefficients ``c_j = (1/N) sum_i f(x_i) exp(-i j x_i)``.

    Exact for trigonometric polynomials of degree below N/2.  Emits a
    :class:`TruncationWarning` when coefficients within the top guard band
    exceed ``1e-6`` of the largest one.
    """
    N = check_grid_size(N)
    J = N // 4 if J_max is None else int(J_max)
    if not 0 <= J <= N // 2 - 1:
        raise DomainError(f"J_max must lie in [0, N/2 - 1], got {J}")
    F = np.fft.fft(samples(f, N)) / N
    j = np.arange(-J, J + 1)
    # x_i = -pi + 2 pi i / N contributes the phase (-1)^j
    c = F[j % N] * np.where(j % 2 == 0, 1.0, -1.0)
    c = 0.5 * (c + np.conj(c[::-1]))
    mags = np.abs(c)
    top = mags.max(initial=0.0)
    band = mags[np.abs(j) > max(J - _GUARD_BAND, 0)]
    truncated = bool(top > 0 and band.size and band.max() > ALIAS_RTOL * top)
    if truncated:
        warnings.warn(f"spectrum of {getattr(f, 'label', 'f')} not negligible near J_max={J}",
                      TruncationWarning, stacklevel=2)
    return Spectrum(c, truncated)


def _as_spectrum(S, need: int = 0) -> Spectrum:
    if isinstance(S, TrigPoly):
        return Spectrum.from_trigpoly(S, max(S.degree, need))
    return S


def _apply(S: Spectrum, mult: np.ndarray, degree: int, label: str) -> TrigPoly:
    J = S.J_max
    out = np.zeros(2 * degree + 1, dtype=complex)
    m = min(degree, J)
    l = np.arange(-m, m + 1)
    out[degree - m:degree + m + 1] = S.coeffs[J - m:J + m + 1] * mult(np.abs(l))
    return TrigPoly(out, label)


def partial_sum(S, i: int) -> TrigPoly:
    """``s_i``: truncation to ``|j| <= i``."""
    S = _as_spectrum(S, i)
    if not 0 <= i <= S.J_max:
        raise DomainError(f"partial sum degree {i} outside [0, {S.J_max}]")
    return _apply(S, lambda l: np.ones(l.shape), i, f"s_{i}")


def _fejer_direct(S: Spectrum, j: int) -> np.ndarray:
    return _apply(S, lambda l: 1.0 - l / (j + 1), j, "").coeffs


def fejer(S, j: int) -> TrigPoly:
    """``sigma_j = (1/(j+1)) sum_{i<=j} s_i``, via the multiplier ``1 - |l|/(j+1)``."""
    S = _as_spectrum(S, j)
    if not 0 <= j <= S.J_max:
        raise DomainError(f"Fejer degree {j} outside [0, {S.J_max}]")
    direct = _fejer_direct(S, j)
    avg = sum(partial_sum(S, i).padded(j) for i in range(j + 1)) / (j + 1)
    if np.max(np.abs(direct - avg), initial=0.0) > _AGREE * max(1.0, np.max(np.abs(direct), initial=0.0)):
        raise InternalError("Fejer multiplier and averaged partial sums disagree")
    return TrigPoly(direct, f"sigma_{j}")


def vallee_poussin_symbol(k: int, m: int):
    """Multiplier of ``v_{k,m}``: 1 up to km, linear ramp to 0 at (k+1)m."""
    hi = (k + 1) * m

    def mult(l):
        l = np.abs(np.asarray(l, dtype=float))
        return np.clip((hi - l) / m, 0.0, 1.0)
    return mult


def vallee_poussin(S, k: int, m: int) -> TrigPoly:
    """``v_{k,m} = (1/m) sum_{i=km}^{(k+1)m-1} s_i = (k+1) sigma_{(k+1)m-1} - k sigma_{km-1}``.

    Both forms are computed and required to agree coefficient-wise.
    """
    if k < 1 or m < 2:
        raise DomainError("need k >= 1 and m >= 2")
    top = (k + 1) * m - 1
    S = _as_spectrum(S, top)
    if top > S.J_max:
        raise DomainError(f"(k+1)m-1 = {top} exceeds J_max = {S.J_max}")
    by_fejer = (k + 1) * _fejer_direct(S, top) - k * np.pad(_fejer_direct(S, k * m - 1), m)
    by_sums = sum(partial_sum(S, i).padded(top) for i in range(k * m, top + 1)) / m
    scale = max(1.0, np.max(np.abs(by_sums), initial=0.0))
    if np.max(np.abs(by_fejer - by_sums), initial=0.0) > _AGREE * scale:
        raise InternalError("Vallee-Poussin forms disagree")
    return TrigPoly(by_sums, f"v_{k},{m}")


def highpass_residual(f, k: int, m: int, N: int = DEFAULT_GRID):
    """``g = f - v_{k,m} f``, whose spectrum vanishes on ``|j| <= km``.

    Trigonometric polynomials are handled exactly in coefficient space;
    other functions go through :func:`analyze` on the N-point grid.
    """
    if isinstance(f, TrigPoly):
        g = f - vallee_poussin(f, k, m)
        low = np.abs(g.padded(k * m))
    else:
        N = check_grid_size(N)
        need = (k + 1) * m - 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            S = analyze(f, N, max(N // 4, need))
        v = vallee_poussin(S, k, m)
        g = PeriodicFunction(lambda x: f(x) - v(x), f"({getattr(f, 'label', 'f')})-v_{k},{m}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            low = np.abs(analyze(g, N, k * m).coeffs)
    if np.max(low, initial=0.0) >= 1e-10:
        raise InternalError(f"residual keeps low-frequency mass {np.max(low):.3e}")
    return g


def spectrum_gap(f, n: int, N: int = DEFAULT_GRID) -> float:
    """Largest ``|c_j|`` over ``|j| <= n`` (exact for trig polynomials)."""
    if isinstance(f, TrigPoly):
        return float(np.max(np.abs(f.padded(n)), initial=0.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return float(np.max(np.abs(analyze(f, N, n).coeffs)))
