"""Box-spline smoothing kernels, averaging operators and local smoothness operators.

Kernels are stored exactly: ``B_h^s(x) = M_s(x/h) / h`` where ``M_s`` is the
s-fold convolution of the box ``1/2 on [-1, 1]``, kept as a piecewise
polynomial with :class:`fractions.Fraction` coefficients on integer
breakpoints.  Derivative identities and L1 norms are therefore computed
without discretisation; quadrature enters only when a function is
convolved with a kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .constants import BETA, PI_SQUARED_LOWER, favard
from .errors import DomainError, InternalError
from .periodic import TrigPoly
from .smoothness import binomial_weights

Poly = tuple  # ascending Fraction coefficients in the global variable t

GAUSS_NODES = 32
# panel width times bandwidth kept below this so 32 nodes resolve the oscillation
_PANEL_PHASE = 16.0


# -- exact polynomial helpers ---------------------------------------------------

def _trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _pscale(p: Poly, c) -> Poly:
    return _trim(c * a for a in p)


def _pshift(p: Poly, d) -> Poly:
    """Coefficients of ``t -> p(t - d)``."""
    out = [Fraction(0)] * len(p)
    for k, a in enumerate(p):
        for j in range(k + 1):
            out[j] += a * comb(k, j) * (-d) ** (k - j)
    return _trim(out)


def _pderiv(p: Poly) -> Poly:
    return _trim(k * a for k, a in enumerate(p) if k)


def _pantideriv(p: Poly) -> Poly:
    return _trim([Fraction(0)] + [a / (k + 1) for k, a in enumerate(p)])


def _peval(p: Poly, t):
    v = 0
    for a in reversed(p):
        v = v * t + a
    return v


class PiecewisePoly:
    """Exact piecewise polynomial on ``[breaks[0], breaks[-1])``, zero elsewhere.

    Evaluation is right-continuous.  Adjacent pieces are kept separate even
    when equal; the representation is not canonical.
    """

    __slots__ = ("breaks", "pieces", "_fbreaks", "_fcoefs")

    def __init__(self, breaks, pieces):
        breaks = tuple(Fraction(b) for b in breaks)
        pieces = tuple(_trim(Fraction(a) for a in p) for p in pieces)
        if len(breaks) != len(pieces) + 1 or any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise DomainError("breakpoints must increase and bracket every piece")
        self.breaks = breaks
        self.pieces = pieces
        self._fbreaks = np.array([float(b) for b in breaks])
        deg = max((len(p) for p in pieces), default=0)
        self._fcoefs = np.zeros((len(pieces), max(deg, 1)))
        for i, p in enumerate(pieces):
            self._fcoefs[i, :len(p)] = [float(a) for a in p]

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        return self.breaks[0], self.breaks[-1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._fbreaks, t, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.pieces))
        c = self._fcoefs[np.clip(idx, 0, len(self.pieces) - 1)]
        v = np.zeros(t.shape)
        for k in range(c.shape[-1] - 1, -1, -1):
            v = v * t + c[..., k]
        return np.where(inside, v, 0.0)

    def at(self, t) -> Fraction:
        """Exact right-continuous value at a rational point."""
        t = Fraction(t)
        for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces):
            if a <= t < b:
                return _peval(p, t)
        return Fraction(0)

    def restrict(self, breaks) -> PiecewisePoly:
        """Same function on a refinement of its breakpoints (zero pieces outside)."""
        pieces = []
        for a, b in zip(breaks, breaks[1:]):
            mid = (a + b) / 2
            p = ()
            for lo, hi, q in zip(self.breaks, self.breaks[1:], self.pieces):
                if lo <= mid < hi:
                    p = q
                    break
            pieces.append(p)
        return PiecewisePoly(breaks, pieces)

    def _merged(self, other: PiecewisePoly):
        br = sorted(set(self.breaks) | set(other.breaks))
        return self.restrict(br), other.restrict(br), br

    def __add__(self, other: PiecewisePoly) -> PiecewisePoly:
        a, b, br = self._merged(other)
        return PiecewisePoly(br, [_padd(p, q) for p, q in zip(a.pieces, b.pieces)])

    def __sub__(self, other: PiecewisePoly) -> PiecewisePoly:
        return self + other.scaled(-1)

    def scaled(self, c) -> PiecewisePoly:
        c = Fraction(c)
        return PiecewisePoly(self.breaks, [_pscale(p, c) for p in self.pieces])

    def shifted(self, d) -> PiecewisePoly:
        """``t -> P(t - d)``."""
        d = Fraction(d)
        return PiecewisePoly([b + d for b in self.breaks], [_pshift(p, d) for p in self.pieces])

    def derivative(self) -> PiecewisePoly:
        return PiecewisePoly(self.breaks, [_pderiv(p) for p in self.pieces])

    def is_zero(self) -> bool:
        return all(len(p) == 0 for p in self.pieces)

    def integral(self) -> Fraction:
        total = Fraction(0)
        for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces):
            q = _pantideriv(p)
            total += _peval(q, b) - _peval(q, a)
        return total

    def l1_norm(self) -> float:
        """``int |P|``: exact on sign-definite pieces, root-split otherwise."""
        total = Fraction(0)
        extra = 0.0
        for a, b, p in zip(self.breaks, self.breaks[1:], self.pieces):
            if not p:
                continue
            q = _pantideriv(p)
            cuts = []
            if len(p) > 1:
                roots = np.roots([float(c) for c in reversed(p)])
                cuts = sorted(r.real for r in roots
                              if abs(r.imag) < 1e-12 and float(a) < r.real < float(b))
            if not cuts:
                total += abs(_peval(q, b) - _peval(q, a))
                continue
            qf = [float(c) for c in q]
            pts = [float(a)] + cuts + [float(b)]
            extra += sum(abs(_peval(qf, v) - _peval(qf, u)) for u, v in zip(pts, pts[1:]))
        return float(total) + extra

    def box_smooth(self) -> PiecewisePoly:
        """``t -> (1/2) int_{t-1}^{t+1} P(u) du``, exactly."""
        br = sorted({b + d for b in self.breaks for d in (-1, 1)})
        anti = [_pantideriv(p) for p in self.pieces]
        pieces = []
        for l, r in zip(br, br[1:]):
            c = (l + r) / 2
            acc: Poly = ()
            for a, b, q in zip(self.breaks, self.breaks[1:], anti):
                if c + 1 <= a or c - 1 >= b:
                    continue
                # moving limit t+1 or t-1 while inside the piece, else a constant
                upper = _pshift(q, -1) if c + 1 < b else (_peval(q, b),)
                lower = _pshift(q, 1) if c - 1 > a else (_peval(q, a),)
                acc = _padd(acc, _padd(upper, _pscale(lower, -1)))
            pieces.append(_pscale(acc, Fraction(1, 2)))
        return PiecewisePoly(br, pieces)

    def __repr__(self):
        return f"PiecewisePoly(breaks={[str(b) for b in self.breaks]})"


def _same(p: PiecewisePoly, q: PiecewisePoly) -> bool:
    return (p - q).is_zero()


@lru_cache(maxsize=None)
def box_spline(s: int) -> PiecewisePoly:
    """``M_s``: s-fold convolution of the box ``1/2`` on ``[-1, 1]``."""
    if s < 1:
        raise DomainError("kernel order must be >= 1")
    if s == 1:
        return PiecewisePoly([-1, 1], [(Fraction(1, 2),)])
    return box_spline(s - 1).box_smooth()


# -- scaled kernels ----------------------------------------------------------------

@dataclass(frozen=True)
class ScaledKernel:
    """``x -> h^power * shape(x / h)`` with an exact shape."""

    shape: PiecewisePoly
    h: float
    power: int

    def __call__(self, x):
        return self.h**self.power * self.shape(np.asarray(x, dtype=float) / self.h)

    @property
    def breakpoints(self) -> np.ndarray:
        return self.h * self.shape._fbreaks

    def integral(self) -> float:
        return self.h ** (self.power + 1) * float(self.shape.integral())

    def l1_norm(self) -> float:
        return self.h ** (self.power + 1) * self.shape.l1_norm()


@dataclass(frozen=True)
class KernelSpec:
    """``B_h^s``: nonnegative, even, unit mass, supported on ``[-sh, sh]``."""

    h: float
    s: int

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f"kernel half-width must be positive, got {self.h}")
        if self.s < 1:
            raise DomainError("kernel order must be >= 1")
        if not self.s * self.h < math.pi:
            raise DomainError(f"need s*h < pi, got s*h = {self.s * self.h}")

    @property
    def shape(self) -> PiecewisePoly:
        return box_spline(self.s)

    @property
    def kernel(self) -> ScaledKernel:
        return ScaledKernel(self.shape, self.h, -1)

    @property
    def pieces(self):
        return self.shape.pieces

    @property
    def breakpoints(self) -> np.ndarray:
        return self.kernel.breakpoints

    def __call__(self, x):
        # evaluate at |x| so float values are exactly even, also at mirrored breakpoints
        return self.kernel(np.abs(np.asarray(x, dtype=float)))

    def integral(self) -> float:
        return self.kernel.integral()

    def l1_norm(self) -> float:
        return self.kernel.l1_norm()


def make_kernel(h: float, s: int) -> KernelSpec:
    return KernelSpec(float(h), int(s))


def difference_shape(shape: PiecewisePoly, m: int, step: int = 2) -> PiecewisePoly:
    """Centered difference ``sum_i w_i P(t - m*step/2 + i*step)`` in t units."""
    out = PiecewisePoly([0, 1], [()])
    for i in range(m + 1):
        w = (-1) ** (m - i) * comb(m, i)
        out = out + shape.shifted(Fraction(m * step, 2) - i * step).scaled(w)
    return out


def kernel_difference(h: float, s: int, m: int) -> ScaledKernel:
    """``Delta_{2h}^m B_h^s`` as an exact signed kernel."""
    make_kernel(h, s)
    return ScaledKernel(difference_shape(box_spline(s), m), h, -1)


@dataclass(frozen=True)
class KernelDerivative:
    direct: ScaledKernel
    identity: ScaledKernel


def kernel_derivative(spec: KernelSpec, m: int, samples: int = 10_000) -> KernelDerivative:
    """``D^m B_h^s`` directly and as ``(2h)^-m Delta_{2h}^m B_h^(s-m)``.

    Both forms are built exactly, compared piece by piece, and sampled at
    ``samples`` points as a floating-point cross-check.
    """
    if not 1 <= m < spec.s:
        raise DomainError(f"derivative order must satisfy 1 <= m < s, got m={m}, s={spec.s}")
    d = spec.shape
    for _ in range(m):
        d = d.derivative()
    direct = ScaledKernel(d, spec.h, -1 - m)
    ident_shape = difference_shape(box_spline(spec.s - m), m).scaled(Fraction(1, 2**m))
    identity = ScaledKernel(ident_shape, spec.h, -1 - m)
    if not _same(d, ident_shape):
        raise InternalError("derivative identity failed in exact arithmetic")
    x = np.linspace(-spec.s * spec.h * 1.05, spec.s * spec.h * 1.05, samples)
    a, b = direct(x), identity(x)
    if np.max(np.abs(a - b)) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
        raise InternalError("derivative identity failed on samples")
    return KernelDerivative(direct, identity)


# -- averaging operators -----------------------------------------------------------------

def _bandwidth(f) -> float:
    return float(f.effective_degree) if isinstance(f, TrigPoly) else 0.0


@lru_cache(maxsize=256)
def _rule(h: float, s: int, bandwidth: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes ``u`` and weights ``w * B_h^s(u)`` over the kernel support."""
    spec = make_kernel(h, s)
    g, gw = np.polynomial.legendre.leggauss(nodes)
    br = spec.breakpoints
    us, ws = [], []
    for a, b in zip(br, br[1:]):
        panels = max(1, math.ceil(bandwidth * (b - a) / _PANEL_PHASE))
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        u = (mid[:, None] + half[:, None] * g).ravel()
        w = (half[:, None] * gw).ravel()
        # evaluate inside the piece to avoid the right-continuity convention at edges
        us.append(u)
        ws.append(w * spec(u))
    return np.concatenate(us), np.concatenate(ws)


def average(f, x, h: float, s: int, nodes: int = GAUSS_NODES):
    """``I_{x,h}^s f = int f(x - u) B_h^s(u) du``; ``s = 0`` gives ``f(x)``.

    Per-piece Gauss-Legendre quadrature; pieces are split into panels when
    the integrand oscillates faster than the node count resolves.
    """
    x = np.asarray(x, dtype=float)
    if s == 0:
        out = np.asarray(f(x), dtype=float)
        return out if out.ndim else float(out)
    h = abs(float(h))
    u, w = _rule(h, int(s), _bandwidth(f), nodes)
    out = average_points(f, x, -u, w)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WOperatorSpec:
    h: float
    k: int
    s: int

    def __post_init__(self):
        if self.k < 1 or self.s < 1 or not self.h > 0:
            raise DomainError("need h > 0, k >= 1, s >= 1")
        if not self.s * self.k * self.h < math.pi:
            raise DomainError(f"need s*k*h < pi, got {self.s * self.k * self.h}")

    @property
    def weights(self) -> np.ndarray:
        """``(-1)^(k-i) C(2k,i) / C(2k,k)`` for ``i = 0..2k``."""
        return binomial_weights(2 * self.k) * (-1) ** self.k / comb(2 * self.k, self.k)


def _w_integral(f, x: np.ndarray, spec: WOperatorSpec, nodes: int) -> np.ndarray:
    # (-1)^k C(2k,k)^-1 int Delta_u^{2k} f(x) B_h^s(u) du
    k = spec.k
    u, w = _rule(spec.h, spec.s, k * _bandwidth(f), nodes)
    dw = binomial_weights(2 * k)
    out = np.zeros(x.shape)
    for i, c in enumerate(dw):
        out += c * average_points(f, x, (i - k) * u, w)
    return (-1) ** k / comb(2 * k, k) * out


def average_points(f, x: np.ndarray, offsets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``sum_q weights[q] f(x + offsets[q])`` for every x.

    For trigonometric polynomials the rule is summed once per frequency,
    ``Q_j = sum_q w_q exp(i j offsets[q])``, and then evaluated at all x;
    this is the same quadrature with the sums reordered.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if isinstance(f, TrigPoly):
        j = f._pos.astype(float)
        Q = np.zeros(j.size, dtype=complex)
        step = max(1, (1 << 22) // max(1, j.size))
        for i in range(0, offsets.size, step):
            Q += weights[i:i + step] @ np.exp(1j * np.multiply.outer(offsets[i:i + step], j))
        c0 = f.coeffs[f.degree].real * float(np.sum(weights))
        out = np.full(flat.size, c0)
        step = max(1, (1 << 22) // max(1, j.size))
        coef = 2.0 * f._posvals * Q
        for i in range(0, flat.size, step):
            out[i:i + step] += np.real(np.exp(1j * np.multiply.outer(flat[i:i + step], j)) @ coef)
        return out.reshape(x.shape)
    out = np.empty(flat.size)
    step = max(1, (1 << 21) // offsets.size)
    for i in range(0, flat.size, step):
        out[i:i + step] = np.asarray(f(flat[i:i + step, None] + offsets[None, :]), dtype=float) @ weights
    return out.reshape(x.shape)


def w_apply(f, x, h: float, k: int, s: int, nodes: int = GAUSS_NODES):
    """Local smoothness operator ``w_{x,h,2k}^s f``.

    Evaluated as the binomially weighted sum of averages with half-widths
    ``|i-k| h`` (point evaluation for ``i = k``) and cross-checked against
    the integral of ``Delta_u^{2k} f(x)`` against ``B_h^s``.
    """
    spec = WOperatorSpec(float(h), int(k), int(s))
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for i, c in enumerate(spec.weights):
        r = abs(i - k)
        out += c * (np.asarray(f(x), dtype=float) if r == 0 else average(f, x, r * h, s, nodes))
    alt = _w_integral(f, x, spec, nodes)
    scale = max(1.0, float(np.max(np.abs(np.asarray(f(x), dtype=float)), initial=0.0)))
    if np.any(np.abs(out - alt) > 1e-9 * scale):
        raise InternalError("w operator: sum and integral forms disagree")
    return out if out.ndim else float(out)


def reconstruct(f, x, h: float, k: int, s: int, nodes: int = GAUSS_NODES):
    """Right side of ``f(x) = w + 2 sum_i (-1)^(i+1) C(2k,k+i)/C(2k,k) I_{x,ih}^s f``."""
    x = np.asarray(x, dtype=float)
    out = np.asarray(w_apply(f, x, h, k, s, nodes), dtype=float)
    b = comb(2 * k, k)
    for i in range(1, k + 1):
        out = out + 2 * (-1) ** (i + 1) * comb(2 * k, k + i) / b * np.asarray(average(f, x, i * h, s, nodes))
    return out if out.ndim else float(out)


# -- contraction bound ------------------------------------------------------------------

@dataclass(frozen=True)
class CBound:
    i: int
    k: int
    n: int
    analytic: float          # 1 / (2 beta^2 i^2)
    chain: float             # F_2 (2ihn)^-2 ||Delta^2_{2ih} B^1_{ih}||_1 at h = beta*pi/(2n)
    contraction_sum: float   # 2 sum_{i<=k} C(2k,k+i)/C(2k,k) / (2 beta^2 i^2)
    contraction_bound: Fraction  # C(2k,k+1)/C(2k,k)


def contraction_holds_exact(k: int) -> bool:
    """Rational check of ``(6/pi^2) sum_i C(2k,k+i)/(C(2k,k) i^2) <= C(2k,k+1)/C(2k,k) < 1``."""
    b = comb(2 * k, k)
    S = sum(Fraction(comb(2 * k, k + i), b * i * i) for i in range(1, k + 1))
    bound = Fraction(comb(2 * k, k + 1), b)
    # 6 S / pi^2 <= 6 S / PI_SQUARED_LOWER
    return 6 * S <= bound * PI_SQUARED_LOWER and bound < 1


def c_bound(i: int, k: int, n: int = 1) -> CBound:
    """Norm bound for ``I^3_{*,ih}`` on functions without spectrum in ``[-n, n]``."""
    if i < 1 or k < 1 or n < 1:
        raise DomainError("need i, k, n >= 1")
    analytic = 1.0 / (2 * BETA**2 * i * i)
    h = BETA * math.pi / (2 * n)
    # ||Delta^2_{2ih} B^1_{ih}||_1 does not depend on the half-width
    box_diff = difference_shape(box_spline(1), 2).l1_norm()
    chain = favard(2) * (2 * i * h * n) ** -2 * box_diff
    if abs(chain - analytic) > 1e-12 * analytic:
        raise InternalError("c(h,3,i) chain disagrees with its closed form")
    b = comb(2 * k, k)
    total = 2 * sum(comb(2 * k, k + q) / b / (2 * BETA**2 * q * q) for q in range(1, k + 1))
    bound = Fraction(comb(2 * k, k + 1), b)
    if not (total <= float(bound) and bound < 1):
        raise InternalError(f"contraction sum {total} exceeds {float(bound)}")
    return CBound(i, k, n, analytic, chain, total, bound)
