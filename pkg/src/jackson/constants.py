"""Named constants: Favard constants, step factors, theorem constants, envelopes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, ToleranceUnachievable

# rational lower bound for pi^2 = 9.8696044010...
PI_SQUARED_LOWER = Fraction(98696, 10000)

EXACT_BINOMIAL_MAX_K = 30
ENVELOPE_MAX_K = 200


@lru_cache(maxsize=None)
def favard(m: int, tol: float = 1e-14) -> float:
    """Favard constant ``(4/pi) sum_i (-1)^(i(m+1)) (2i+1)^(-m-1)`` to absolute accuracy ``tol``.

    For odd m every term is positive; the tail past I terms is replaced by
    the midpoint integral ``int_{I-1/2}^inf (2x+1)^-p dx`` whose error for
    a convex summand is bounded by ``p (2I)^(-p-1) / 12``.  For even m the
    series alternates and the first omitted term bounds the tail.
    """
    if m < 1:
        raise DomainError("Favard constant needs m >= 1")
    if tol < 1e-15:
        raise ToleranceUnachievable(f"tol {tol} below 1e-15")
    p = m + 1
    budget = tol * math.pi / 8  # half of tol, after the 4/pi factor
    if m % 2:
        I = 1
        while p * (2.0 * I) ** (-p - 1) / 12 > budget:
            I *= 2
        head = math.fsum((2 * i + 1.0) ** -p for i in reversed(range(I)))
        tail = (2.0 * I) ** (1 - p) / (2 * (p - 1))
        return 4 / math.pi * (head + tail)
    I = 1
    while (2 * I + 1.0) ** -p > budget:
        I *= 2
    head = math.fsum((-1) ** i * (2 * i + 1.0) ** -p for i in reversed(range(I)))
    return 4 / math.pi * head


def alpha_beta() -> tuple[float, float]:
    """``alpha = 2^(-5/2) 3^(1/2) pi`` and ``beta = pi / sqrt(6)``."""
    alpha = 2 ** -2.5 * math.sqrt(3) * math.pi
    beta = math.pi / math.sqrt(6)
    # smoothing step 3h with h = beta*pi/(2n) equals (2pi/n)*alpha
    assert abs(1.5 * beta - 2 * alpha) < 1e-15
    return alpha, beta


ALPHA, BETA = alpha_beta()


@dataclass(frozen=True)
class TheoremConstants:
    k: int
    c1_exact: Fraction
    c2_exact: Fraction

    @property
    def c1(self) -> float:
        return float(self.c1_exact)

    @property
    def c2(self) -> float:
        return float(self.c2_exact)


def theorem_constants(k: int) -> TheoremConstants:
    """``c1 = 2(k+1)^2 / C(2k,k)`` and ``c2 = (k+1) / C(2k,k)``, exactly."""
    if k < 1:
        raise DomainError("k must be >= 1")
    b = comb(2 * k, k)
    return TheoremConstants(k, Fraction(2 * (k + 1) ** 2, b), Fraction(k + 1, b))


def binom_bounds(k: int) -> tuple[float, int, float]:
    """Check ``4^k / sqrt(pi(k+1/2)) < C(2k,k) < 4^k / sqrt(pi k)``."""
    if not 1 <= k <= EXACT_BINOMIAL_MAX_K:
        raise DomainError(f"k must lie in [1, {EXACT_BINOMIAL_MAX_K}]")
    b = comb(2 * k, k)
    lower = 4.0**k / math.sqrt(math.pi * (k + 0.5))
    upper = 4.0**k / math.sqrt(math.pi * k)
    if not lower < b < upper:
        raise AssertionError(f"central binomial bounds fail at k={k}")
    return lower, b, upper


def log_central_binomial(k: int) -> float:
    """Natural log of ``C(2k, k)``: exact through k=30, log-gamma beyond."""
    if k <= EXACT_BINOMIAL_MAX_K:
        return math.log(comb(2 * k, k))
    return math.lgamma(2 * k + 1) - 2 * math.lgamma(k + 1)


@dataclass(frozen=True)
class EnvelopeRow:
    m: int
    c1: float
    ratio: float


def jbound_envelope(k_max: int) -> list[EnvelopeRow]:
    """Rows ``(m=2k, c1(k), c1(k) * 2^(m - 2.5 log2 m))`` for ``1 <= k <= k_max``."""
    if not 1 <= k_max <= ENVELOPE_MAX_K:
        raise DomainError(f"k_max must lie in [1, {ENVELOPE_MAX_K}]")
    rows = []
    for k in range(1, k_max + 1):
        m = 2 * k
        log_c1 = math.log(2) + 2 * math.log(k + 1) - log_central_binomial(k)
        log_ratio = log_c1 + (m - 2.5 * math.log2(m)) * math.log(2)
        rows.append(EnvelopeRow(m, math.exp(log_c1), math.exp(log_ratio)))
    return rows


def envelope_sup(k_max: int = ENVELOPE_MAX_K) -> float:
    return max(r.ratio for r in jbound_envelope(k_max))


@dataclass(frozen=True)
class ConstantsTable:
    favard: dict[int, float]
    alpha: float
    beta: float
    c1: dict[int, float]
    c2: dict[int, float]
    envelope: list[EnvelopeRow] = field(default_factory=list)

    def rows(self) -> list[dict]:
        """Flat records, one per index, for tabular output."""
        out = []
        for m, v in self.favard.items():
            out.append({"name": "favard", "index": m, "value": v})
        out.append({"name": "alpha", "index": 0, "value": self.alpha})
        out.append({"name": "beta", "index": 0, "value": self.beta})
        for k, v in self.c1.items():
            out.append({"name": "c1", "index": k, "value": v})
        for k, v in self.c2.items():
            out.append({"name": "c2", "index": k, "value": v})
        for r in self.envelope:
            out.append({"name": "envelope_ratio", "index": r.m, "value": r.ratio})
        return out


def constants_table(max_m: int = 8, k_max: int = 30) -> ConstantsTable:
    c = [theorem_constants(k) for k in range(1, k_max + 1)]
    return ConstantsTable(
        favard={m: favard(m) for m in range(1, max_m + 1)},
        alpha=ALPHA,
        beta=BETA,
        c1={t.k: t.c1 for t in c},
        c2={t.k: t.c2 for t in c},
        envelope=jbound_envelope(k_max),
    )
