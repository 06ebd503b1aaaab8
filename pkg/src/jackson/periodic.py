"""Functions on the circle [-pi, pi): evaluation contracts, grids, trig polynomials.

Every other module consumes the types defined here.  Grids are uniform,
closed on the left and open on the right: ``x_i = -pi + 2*pi*i/N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, EvaluationError, InvalidCoefficients

TWO_PI = 2.0 * math.pi
DEFAULT_GRID = 2**14
ACCEPTANCE_GRID = 2**16

_SYMMETRY_RTOL = 1e-12
_RESIDUE_TOL = 1e-12
_EVAL_CHUNK = 1 << 20


def check_grid_size(N: int) -> int:
    N = int(N)
    if N < 16 or N & (N - 1):
        raise DomainError(f"grid size must be a power of two >= 16, got {N}")
    return N


def grid(N: int) -> np.ndarray:
    """Angles ``-pi + 2*pi*i/N`` for ``i = 0..N-1``."""
    N = check_grid_size(N)
    return -math.pi + TWO_PI * np.arange(N) / N


@dataclass(frozen=True)
class PeriodicFunction:
    """A 2*pi-periodic real function given by a vectorised callable."""

    func: Callable[[np.ndarray], np.ndarray]
    label: str = "f"

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def __sub__(self, other):
        return PeriodicFunction(lambda x: self(x) - other(x), f"({self.label})-({_label(other)})")

    def __add__(self, other):
        return PeriodicFunction(lambda x: self(x) + other(x), f"({self.label})+({_label(other)})")

    def scaled(self, c: float) -> PeriodicFunction:
        return PeriodicFunction(lambda x: c * self(x), f"{c}*({self.label})")

    def translated(self, a: float) -> PeriodicFunction:
        """Return ``x -> f(x - a)``."""
        return PeriodicFunction(lambda x: self(np.asarray(x) - a), f"({self.label})(x-{a})")


def _label(f) -> str:
    return getattr(f, "label", repr(f))


class TrigPoly:
    """Real trigonometric polynomial ``sum_{|j|<=n} c_j exp(i j x)``.

    ``coeffs[j + n]`` holds ``c_j``.  The array must be conjugate symmetric;
    evaluation uses the equivalent real form so results are real by
    construction.
    """

    __slots__ = ("coeffs", "label", "_pos", "_posvals")

    def __init__(self, coeffs, label: str = "trigpoly"):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise InvalidCoefficients("coefficient array must be 1-d with odd length 2n+1")
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        if np.any(np.abs(c - np.conj(c[::-1])) > _SYMMETRY_RTOL * max(scale, 1e-300)):
            raise InvalidCoefficients("coefficients violate c_{-j} = conj(c_j)")
        n = c.size // 2
        # symmetrise exactly so the real form is unambiguous
        c = 0.5 * (c + np.conj(c[::-1]))
        c[n] = c[n].real
        c.setflags(write=False)
        self.coeffs = c
        self.label = label
        pos = np.flatnonzero(c[n + 1:]) + 1
        self._pos = pos
        self._posvals = c[n + pos]

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, n: int = 0, label: str = "0") -> TrigPoly:
        return cls(np.zeros(2 * n + 1, dtype=complex), label)

    @classmethod
    def from_real(cls, a, b=None, label: str = "trigpoly") -> TrigPoly:
        """Build from ``a_0 + sum_j a_j cos(jx) + b_j sin(jx)``; ``b[0]`` is ignored."""
        a = np.asarray(a, dtype=float)
        n = a.size - 1
        b = np.zeros(n + 1) if b is None else np.asarray(b, dtype=float)
        if b.size != n + 1:
            raise DomainError("a and b must have the same length")
        c = np.zeros(2 * n + 1, dtype=complex)
        c[n] = a[0]
        c[n + 1:] = 0.5 * (a[1:] - 1j * b[1:])
        c[:n] = np.conj(c[n + 1:][::-1])
        return cls(c, label)

    @classmethod
    def from_terms(cls, terms: dict[int, complex], label: str = "trigpoly") -> TrigPoly:
        """Build from ``{j: c_j}`` for ``j >= 0``; negative frequencies are implied."""
        if any(j < 0 for j in terms):
            raise DomainError("give nonnegative frequencies only")
        n = max(terms, default=0)
        c = np.zeros(2 * n + 1, dtype=complex)
        for j, v in terms.items():
            if j == 0:
                c[n] = complex(v).real
            else:
                c[n + j] = v
                c[n - j] = np.conj(v)
        return cls(c, label)

    # -- views ---------------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.coeffs.size // 2

    @property
    def effective_degree(self) -> int:
        """Largest frequency with a nonzero coefficient."""
        return int(self._pos[-1]) if self._pos.size else 0

    def coef(self, j: int) -> complex:
        n = self.degree
        return complex(self.coeffs[n + j]) if abs(j) <= n else 0j

    def to_real(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.degree
        a = np.empty(n + 1)
        b = np.zeros(n + 1)
        a[0] = self.coeffs[n].real
        a[1:] = 2.0 * self.coeffs[n + 1:].real
        b[1:] = -2.0 * self.coeffs[n + 1:].imag
        return a, b

    def padded(self, n: int) -> np.ndarray:
        """Coefficients zero-padded (or truncated) to degree ``n``."""
        d = self.degree
        out = np.zeros(2 * n + 1, dtype=complex)
        m = min(n, d)
        out[n - m:n + m + 1] = self.coeffs[d - m:d + m + 1]
        return out

    # -- evaluation ------------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.full(flat.shape, self.coeffs[self.degree].real)
        if self._pos.size:
            re = 2.0 * self._posvals.real
            im = -2.0 * self._posvals.imag
            step = max(1, _EVAL_CHUNK // self._pos.size)
            for s in range(0, flat.size, step):
                phase = np.outer(flat[s:s + step], self._pos)
                out[s:s + step] += np.cos(phase) @ re + np.sin(phase) @ im
        return out.reshape(x.shape)

    def grid_values(self, N: int, multiplier=None) -> np.ndarray:
        """Exact samples on the N-point grid via one real FFT.

        ``multiplier`` maps the positive frequencies (array) to complex
        factors, broadcast to shape ``(..., K)``; the conjugate factor is
        applied to ``-j``.  The constant term is multiplied by
        ``multiplier(0)``.  Frequencies beyond N/2 are folded (aliased)
        onto their grid bins, which keeps the samples exact.
        """
        N = check_grid_size(N)
        vals = self._posvals
        c0 = self.coeffs[self.degree].real
        if multiplier is not None:
            vals = vals * multiplier(self._pos.astype(float))
            c0 = c0 * multiplier(np.zeros(1))[..., 0]
        vals = np.asarray(vals, dtype=complex)
        batch = vals.shape[:-1]
        H = np.zeros(batch + (N // 2 + 1,), dtype=complex)
        H[..., 0] += c0
        sign = np.where(self._pos % 2 == 0, 1.0, -1.0)
        v = vals * sign
        r = self._pos % N
        lo = r <= N // 2
        _scatter(H, r[lo], v[..., lo])
        hi = (N - r) % N <= N // 2
        _scatter(H, ((N - r) % N)[hi], np.conj(v[..., hi]))
        return np.fft.irfft(H, n=N, axis=-1) * N

    # -- algebra -----------------------------------------------------------------
    def _binary(self, other: TrigPoly, sign: float) -> TrigPoly:
        n = max(self.degree, other.degree)
        return TrigPoly(self.padded(n) + sign * other.padded(n),
                        f"({self.label}){'+' if sign > 0 else '-'}({other.label})")

    def __add__(self, other: TrigPoly) -> TrigPoly:
        return self._binary(other, 1.0)

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        return self._binary(other, -1.0)

    def __neg__(self) -> TrigPoly:
        return TrigPoly(-self.coeffs, f"-({self.label})")

    def scaled(self, c: float) -> TrigPoly:
        return TrigPoly(c * self.coeffs, f"{c}*({self.label})")

    def translated(self, a: float) -> TrigPoly:
        """Return ``x -> tau(x - a)``."""
        j = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(self.coeffs * np.exp(-1j * j * a), f"({self.label})(x-{a})")

    def derivative(self, m: int = 1) -> TrigPoly:
        j = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(self.coeffs * (1j * j) ** m, f"D^{m}({self.label})")

    def truncated(self, n: int) -> TrigPoly:
        return TrigPoly(self.padded(n), f"s_{n}({self.label})")

    def __repr__(self):
        return f"TrigPoly(degree={self.degree}, label={self.label!r})"


def _scatter(H: np.ndarray, bins: np.ndarray, vals: np.ndarray) -> None:
    if bins.size == 0:
        return
    if np.unique(bins).size == bins.size:
        H[..., bins] += vals
    else:
        for b, col in zip(bins, np.moveaxis(vals, -1, 0)):
            H[..., b] += col


def eval_trigpoly(tau: TrigPoly, x) -> np.ndarray:
    """Evaluate ``sum c_j exp(i j x)`` in complex form, checking the imaginary residue."""
    x = np.asarray(x, dtype=float)
    n = tau.degree
    j = np.arange(-n, n + 1)
    c = np.asarray(tau.coeffs)
    if np.any(np.abs(c - np.conj(c[::-1])) > _SYMMETRY_RTOL * max(float(np.max(np.abs(c))), 1e-300)):
        raise InvalidCoefficients("coefficients violate c_{-j} = conj(c_j)")
    z = np.exp(1j * np.multiply.outer(x, j)) @ c
    scale = max(1.0, float(np.sum(np.abs(c))))
    if np.any(np.abs(z.imag) >= _RESIDUE_TOL * scale):
        raise InvalidCoefficients("imaginary residue exceeds tolerance")
    return z.real


def samples(f, N: int) -> np.ndarray:
    """Values of ``f`` on the N-point grid (exact FFT route for trig polynomials)."""
    N = check_grid_size(N)
    if isinstance(f, TrigPoly):
        v = f.grid_values(N)
    else:
        v = np.asarray(f(grid(N)), dtype=float)
    if not np.all(np.isfinite(v)):
        raise EvaluationError(f"non-finite sample of {_label(f)}")
    return v


def sup_norm(f, N: int = DEFAULT_GRID) -> float:
    """Grid maximum of ``|f|``.

    This is a lower bound on the true sup norm and converges as N grows.
    """
    return float(np.max(np.abs(samples(f, N))))


@dataclass(frozen=True)
class GridFunction:
    """Samples on the uniform grid ``-pi + 2*pi*i/N``."""

    values: np.ndarray
    n_points: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        check_grid_size(v.size)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n_points", v.size)

    @classmethod
    def from_function(cls, f, N: int) -> GridFunction:
        return cls(samples(f, N))

    @property
    def x(self) -> np.ndarray:
        return grid(self.n_points)

    def l1_norm(self) -> float:
        # periodic trapezoid rule
        if not np.all(np.isfinite(self.values)):
            raise EvaluationError("non-finite grid value")
        return float(TWO_PI / self.n_points * np.sum(np.abs(self.values)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


def l1_norm(g) -> float:
    """Integral of ``|g|`` over the circle.

    Piecewise-polynomial kernels are integrated exactly piece by piece;
    grid functions use the periodic trapezoid rule.
    """
    if not hasattr(g, "l1_norm"):
        raise DomainError(f"cannot take the L1 norm of {type(g).__name__}")
    return g.l1_norm()


# -- test-function families ---------------------------------------------------

def harmonic(j: int = 1, amplitude: float = 1.0) -> TrigPoly:
    """``amplitude * cos(j x)``."""
    return TrigPoly.from_terms({int(j): amplitude / 2 if j else amplitude},
                               f"harmonic(j={j},amplitude={amplitude})")


def highpass(n: int, weights=(1.0, 0.5)) -> TrigPoly:
    """``sum_q weights[q] cos(((q+1)(n+1) + q) x)``: spectrum strictly above n.

    With default weights this is ``cos((n+1)x) + 0.5 cos((2n+3)x)``.
    """
    terms = {}
    for q, w in enumerate(weights):
        terms[(q + 1) * (n + 1) + q] = w / 2
    return TrigPoly.from_terms(terms, f"highpass(n={n},weights={list(weights)})")


def random_highpass(n: int, width: int = 8, seed: int = 0) -> TrigPoly:
    """Seeded random real polynomial with spectrum in ``n < |j| <= n + width``."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(width)
    b = rng.standard_normal(width)
    terms = {n + 1 + q: 0.5 * (a[q] - 1j * b[q]) for q in range(width)}
    return TrigPoly.from_terms(terms, f"random_highpass(n={n},width={width},seed={seed})")


def sawtooth(terms: int = 64) -> TrigPoly:
    """Partial Fourier sum ``sum_{j<=terms} sin(jx)/j`` of the sawtooth wave."""
    b = np.zeros(terms + 1)
    b[1:] = 1.0 / np.arange(1, terms + 1)
    return TrigPoly.from_real(np.zeros(terms + 1), b, f"sawtooth(terms={terms})")


def weierstrass(a: float = 0.5, b: int = 3, terms: int = 12) -> TrigPoly:
    """Lacunary sum ``sum_{i<terms} a^i cos(b^i x)``."""
    if not 0 < a < 1 or b < 2:
        raise DomainError("need 0 < a < 1 and integer b >= 2")
    return TrigPoly.from_terms({int(b) ** i: a**i / 2 for i in range(terms)},
                               f"weierstrass(a={a},b={b},terms={terms})")


def random_poly(degree: int = 24, seed: int = 0, decay: float = 1.0) -> TrigPoly:
    """Seeded random real polynomial, coefficients N(0,1)/(1+j)^decay."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(degree + 1)
    b = rng.standard_normal(degree + 1)
    w = 1.0 / (1.0 + np.arange(degree + 1)) ** decay
    b[0] = 0.0
    return TrigPoly.from_real(a * w, b * w, f"random(degree={degree},seed={seed},decay={decay})")


FAMILIES: dict[str, Callable[..., TrigPoly]] = {
    "harmonic": harmonic,
    "highpass": highpass,
    "random_highpass": random_highpass,
    "sawtooth": sawtooth,
    "weierstrass": weierstrass,
    "random": random_poly,
}


def build_family(name: str, **params) -> TrigPoly:
    """Construct a registered family member by name."""
    try:
        ctor = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {sorted(FAMILIES)}") from None
    return ctor(**params)
