from __future__ import annotations

import csv
import io
import json
import math

import pytest

from jackson.constants import ALPHA, favard
from jackson.errors import DomainError, InvalidInput
from jackson.periodic import TrigPoly, build_family
from jackson.smoothness import modulus
from jackson.verify import (REPORT_FIELDS, ConfigError, Envelope, FamilySpec, RunConfig,
                            TheoremReport, W_BOUND, check_envelope, check_theorem1, check_theorem2,
                            check_theorem3, check_theoremF, interval_modulus, oscillating_function,
                            oscillation_probe, recheck, reports_to_csv, reports_to_json, run,
                            worker_count)

CFG = RunConfig(grid=2**12, step_grid=128, timing=False)


def cos(j):
    return TrigPoly.from_terms({j: 0.5}, f"cos{j}")


def test_report_predicate():
    r = TheoremReport("1", "f", {}, 8, 1, 2, 1.0, 2.0, 1e-6, 64)
    assert r.passed and r.ratio == 0.5
    z = TheoremReport("2", "0", {}, 8, 1, 2, 0.0, 0.0, 1e-6, 64)
    assert z.passed and z.ratio == 0.0
    bad = TheoremReport("2", "f", {}, 8, 1, 2, 1.1, 1.0, 1e-6, 64)
    assert not bad.passed
    assert list(r.to_dict()) == list(REPORT_FIELDS)


def test_theorem1_examples():
    r = check_theorem1(cos(9), 8, 1, CFG)
    assert r.lhs == pytest.approx(1.0, abs=1e-8)
    delta = 2 * math.pi / 8 * ALPHA * 2
    assert r.rhs == pytest.approx(4 * modulus(cos(9), 2, delta, CFG.grid, CFG.step_grid))
    # the cap 4 of omega_2 is hit only up to the step-grid spacing
    assert r.rhs == pytest.approx(16.0, rel=1e-4)
    assert r.passed
    low = check_theorem1(build_family("random", degree=6), 8, 2, CFG)
    assert low.lhs < 1e-12 and low.passed
    with pytest.raises(DomainError):
        check_theorem1(cos(9), 3, 2, CFG)


def test_theorem2_examples():
    for n in (2, 5, 8):
        r = check_theorem2(cos(n + 1), n, 1, CFG)
        assert r.lhs == pytest.approx(1.0) and r.rhs >= 1 and r.passed
    z = check_theorem2(TrigPoly.zero(3), 4, 2, CFG)
    assert z.lhs == 0 and z.ratio == 0 and z.passed
    with pytest.raises(InvalidInput):
        check_theorem2(cos(3), 4, 1, CFG)


def test_theorem3_examples():
    r = check_theorem3(build_family("random", degree=8), 2, 4, CFG)
    assert r.lhs < 1e-12 and r.passed
    s = check_theorem3(build_family("sawtooth", terms=32), 2, 2, CFG)
    assert s.passed and s.params["residual_check"]["pass"]
    with pytest.raises(DomainError):
        check_theorem3(cos(2), 1, 1, CFG)


def test_theoremF_examples():
    r = check_theoremF(cos(5), 4, 1, CFG)
    assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(math.pi / 2)
    for m in (2, 3, 5):
        r = check_theoremF(cos(5), 4, m, CFG)
        assert r.rhs == pytest.approx(favard(m)) and r.rhs > 1 and r.passed
    with pytest.raises(InvalidInput):
        check_theoremF(cos(3), 4, 1, CFG)


def test_oscillation_probe():
    a, b = 0.0, 1.0
    r = oscillation_probe(Envelope("const"), 4, 1, a, b, CFG)
    assert r.passed and r.params["empirical_ratio"] < W_BOUND
    assert r.params["membership"] < 1e-10
    z = oscillation_probe(Envelope("zero"), 4, 1, a, b, CFG)
    assert z.ratio == 0 and z.passed
    with pytest.raises(DomainError):
        oscillation_probe(Envelope("const"), 1, 2)


def test_interval_modulus_stays_inside():
    seen = []

    def spy(u):
        seen.append((u.min(), u.max()))
        return oscillating_function(Envelope("random", 3), 8, -1.0, 2.0)(u)
    interval_modulus(spy, 3, 3 / 8, -1.0, 2.0, 257, 32)
    assert min(s[0] for s in seen) >= -1.0 and max(s[1] for s in seen) <= 2.0


def test_envelope_report():
    r = check_envelope(200, CFG)
    assert r.passed and r.lhs == pytest.approx(2 * math.sqrt(2))


def test_config_parsing():
    cfg = RunConfig.from_dict({"families": [{"name": "sawtooth", "params": {"terms": 8}}, "harmonic"],
                               "n": [8], "k": [1], "grid": 1024})
    assert cfg.families[1] == FamilySpec("harmonic")
    for bad in ({"families": [{"name": "nope"}]}, {"what": 1}, {"envelopes": [{"kind": "odd"}]},
                {"interval": [1, 0]}, {"slack": -1}, [1, 2]):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(bad)


def test_run_ordering_and_serialization(monkeypatch):
    monkeypatch.setenv("JACKSON_THREADS", "3")
    assert worker_count() <= 3
    cfg = RunConfig.from_dict({"families": [{"name": "highpass"}, {"name": "random_highpass",
                                                                   "params": {"seed": 7}}],
                               "n": [4, 8], "k": [1, 2], "grid": 1024, "step_grid": 64,
                               "timing": False})
    reps = run("2", cfg)
    assert [(r.family, r.n, r.k) for r in reps] == [
        (f, n, k) for f in ("highpass", "random_highpass") for n in (4, 8) for k in (1, 2)]
    assert reps[-1].seed == 7
    records = json.loads(reports_to_json(reps))
    assert all(recheck(d) for d in records)
    text = reports_to_csv(reps)
    assert text == reports_to_csv(run("2", cfg))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == list(REPORT_FIELDS) and len(rows) == len(reps)
    assert json.loads(rows[0]["params"])["n"] == 4


def test_empty_run():
    assert run("1", RunConfig(grid=1024)) == []
    assert reports_to_csv([]).strip() == ",".join(REPORT_FIELDS)


def test_bad_thread_cap(monkeypatch):
    monkeypatch.setenv("JACKSON_THREADS", "many")
    with pytest.raises(ConfigError):
        worker_count()
