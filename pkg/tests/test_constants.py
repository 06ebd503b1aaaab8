from __future__ import annotations

import math

import pytest
from mpmath import mp, nsum, inf

from jackson.constants import (ALPHA, BETA, binom_bounds, constants_table, envelope_sup, favard,
                               jbound_envelope, theorem_constants)
from jackson.errors import DomainError, ToleranceUnachievable


def test_favard_closed_forms():
    assert abs(favard(1) - math.pi / 2) < 1e-12
    assert abs(favard(2) - math.pi**2 / 8) < 1e-12
    assert abs(favard(3) - math.pi**3 / 24) < 1e-12


@pytest.mark.parametrize("m", range(1, 9))
def test_favard_against_mpmath(m):
    mp.dps = 30
    ref = 4 / mp.pi * nsum(lambda i: (-1) ** (i * (m + 1)) / (2 * i + 1) ** (m + 1), [0, inf])
    assert abs(favard(m) - float(ref)) < 1e-14


def test_favard_errors():
    with pytest.raises(DomainError):
        favard(0)
    with pytest.raises(ToleranceUnachievable):
        favard(2, 1e-16)


def test_favard_sequence_bounds():
    vals = [favard(m) for m in range(1, 12)]
    assert all(1 <= v <= math.pi / 2 + 1e-15 for v in vals)
    assert vals[0] == max(vals)


def test_alpha_beta():
    assert ALPHA == pytest.approx(0.961912, abs=1e-6) and ALPHA < 1
    assert BETA == pytest.approx(1.282550, abs=1e-6)
    assert abs(1.5 * BETA - 2 * ALPHA) < 1e-15


def test_theorem_constants_worked_values():
    assert [theorem_constants(k).c2 for k in (1, 2, 3)] == [1.0, 0.5, 0.2]
    assert [theorem_constants(k).c1 for k in (1, 2, 3)] == [4.0, 3.0, 1.6]
    with pytest.raises(DomainError):
        theorem_constants(0)


def test_binomial_bounds():
    for k in range(1, 31):
        lo, b, hi = binom_bounds(k)
        assert lo < b < hi
    with pytest.raises(DomainError):
        binom_bounds(31)


def test_envelope():
    rows = jbound_envelope(200)
    assert rows[0].ratio == pytest.approx(2 * math.sqrt(2))
    assert rows[1].ratio == pytest.approx(1.5)
    assert envelope_sup(200) <= 4
    # mpmath oracle at a large k
    mp.dps = 50
    k = 200
    ref = 2 * (k + 1) ** 2 / mp.binomial(2 * k, k) * mp.mpf(2) ** (2 * k - 2.5 * mp.log(2 * k, 2))
    assert rows[-1].ratio == pytest.approx(float(ref), rel=1e-10)
    with pytest.raises(DomainError):
        jbound_envelope(201)


def test_constants_table_rows():
    t = constants_table(3, 2)
    names = [r["name"] for r in t.rows()]
    assert names.count("favard") == 3 and names.count("c1") == 2 and "alpha" in names
