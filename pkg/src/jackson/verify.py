"""Inequality checkers, sweep configuration and report output.

Each checker returns a :class:`TheoremReport` whose pass flag is the
predicate ``lhs <= rhs * (1 + slack)``.  Both sides are grid quantities
(lower bounds of their continuous counterparts), so a pass is numerical
evidence rather than a proof.
"""

from __future__ import annotations

import csv
import inspect
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .constants import ALPHA, envelope_sup, favard, theorem_constants
from .errors import DomainError, InvalidConstruction, InvalidInput
from .fourier import highpass_residual, spectrum_gap
from .minimax import MinimaxResult, best_approximation, en_upper_via_vp
from .periodic import ACCEPTANCE_GRID, FAMILIES, TrigPoly, build_family, sup_norm
from .smoothness import DEFAULT_STEP_GRID, binomial_weights, step_grid
from .smoothness import modulus as grid_modulus

W_BOUND = 2 + math.exp(-2)
SPECTRUM_GAP_TOL = 1e-10
MEMBERSHIP_TOL = 1e-10

REPORT_FIELDS = ("theorem", "family", "params", "n", "k", "m", "lhs", "rhs", "ratio",
                 "pass", "slack", "grid", "seed", "runtime_ms")
THEOREMS = ("1", "2", "3", "F", "W", "J")


class ConfigError(DomainError):
    """Malformed or inconsistent run configuration."""


@dataclass
class TheoremReport:
    theorem: str
    family: str
    params: dict
    n: int
    k: int
    m: int
    lhs: float
    rhs: float
    slack: float
    grid: int
    seed: int = 0
    runtime_ms: float = 0.0

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        return bool(self.lhs <= self.rhs * (1 + self.slack))

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem, "family": self.family, "params": self.params,
            "n": self.n, "k": self.k, "m": self.m, "lhs": self.lhs, "rhs": self.rhs,
            "ratio": self.ratio, "pass": self.passed, "slack": self.slack,
            "grid": self.grid, "seed": self.seed, "runtime_ms": self.runtime_ms,
        }


def recheck(record: dict) -> bool:
    """Recompute the pass predicate of a serialized report."""
    return record["lhs"] <= record["rhs"] * (1 + record["slack"]) and record["pass"]


@dataclass
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    def build(self, n: int | None = None) -> TrigPoly:
        params = dict(self.params)
        ctor = FAMILIES[self.name]
        if n is not None and "n" in inspect.signature(ctor).parameters and "n" not in params:
            params["n"] = n
        return build_family(self.name, **params)

    def resolved_params(self, n: int | None = None) -> dict:
        params = dict(self.params)
        if n is not None and "n" in inspect.signature(FAMILIES[self.name]).parameters:
            params.setdefault("n", n)
        return params


@dataclass
class Envelope:
    """Smooth envelope for the oscillation probe: ``1 + sum a_q cos(q t) + b_q sin(q t)``.

    ``t = 2 pi (u - a) / (b - a)``.  ``kind`` is ``const``, ``random`` or ``zero``.
    """

    kind: str = "const"
    seed: int = 0
    amplitude: float = 0.3
    terms: int = 3

    def coefficients(self):
        if self.kind == "const":
            return 1.0, np.zeros(self.terms), np.zeros(self.terms)
        if self.kind == "zero":
            return 0.0, np.zeros(self.terms), np.zeros(self.terms)
        if self.kind == "random":
            rng = np.random.default_rng(self.seed)
            c = rng.uniform(-1, 1, size=(2, self.terms)) * self.amplitude / self.terms
            return 1.0, c[0], c[1]
        raise ConfigError(f"unknown envelope kind {self.kind!r}")


@dataclass
class RunConfig:
    families: list[FamilySpec] = field(default_factory=list)
    n: list[int] = field(default_factory=lambda: [8, 16, 32, 64])
    k: list[int] = field(default_factory=lambda: [1, 2, 3])
    m: list[int] = field(default_factory=lambda: [2, 4, 8])
    grid: int = ACCEPTANCE_GRID
    step_grid: int = DEFAULT_STEP_GRID
    tol: float = 1e-10
    slack: float = 1e-6
    seed: int = 0
    timing: bool = True
    refine: bool = False
    envelopes: list[Envelope] = field(default_factory=list)
    interval: tuple[float, float] = (0.0, 1.0)
    probe_grid: int = 4097
    k_max: int = 200

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        data = dict(data)
        try:
            fams = [FamilySpec(d["name"], dict(d.get("params", {}))) if isinstance(d, dict)
                    else FamilySpec(str(d)) for d in data.pop("families", [])]
            envs = [Envelope(**e) for e in data.pop("envelopes", [])]
            if "interval" in data:
                a, b = data.pop("interval")
                data["interval"] = (float(a), float(b))
            cfg = cls(families=fams, envelopes=envs, **data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> RunConfig:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc

    def validate(self) -> None:
        for fam in self.families:
            if fam.name not in FAMILIES:
                raise ConfigError(f"unknown family {fam.name!r}")
        for e in self.envelopes:
            e.coefficients()
        if self.slack < 0:
            raise ConfigError("slack must be nonnegative")
        if self.interval[1] <= self.interval[0]:
            raise ConfigError("interval must have a < b")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


def _setup(config: RunConfig | None) -> RunConfig:
    return config if config is not None else RunConfig()


def _ms(t0: float, config: RunConfig) -> float:
    return round((time.perf_counter() - t0) * 1e3, 3) if config.timing else 0.0


# -- theorem checkers -----------------------------------------------------------------

def check_theorem1(f, n: int, k: int, config: RunConfig | None = None,
                   minimax: MinimaxResult | None = None) -> TheoremReport:
    """``E_n(f) <= 2(k+1)^2/C(2k,k) * omega_2k(f, (2pi/n) alpha (1+1/k))`` for ``n >= 2k``."""
    cfg = _setup(config)
    if n < 2 * k:
        raise DomainError(f"need n >= 2k, got n={n}, k={k}")
    t0 = time.perf_counter()
    c = theorem_constants(k)
    N = cfg.grid
    mm = minimax if minimax is not None else best_approximation(f, n, N, cfg.tol)
    delta = 2 * math.pi / n * ALPHA * (1 + 1 / k)
    rhs = c.c1 * grid_modulus(f, 2 * k, delta, N, cfg.step_grid)
    params = {"delta": delta, "converged": mm.converged, "iterations": mm.iterations,
              "max_error": mm.max_error, "vp_upper": en_upper_via_vp(f, n, N=N, minimax=mm)}
    if cfg.refine:
        params["refined_lhs"] = best_approximation(f, n, 2 * N, cfg.tol).error_level
        params["refined_rhs"] = c.c1 * grid_modulus(f, 2 * k, delta, 2 * N, 2 * cfg.step_grid)
    return TheoremReport("1", getattr(f, "label", "f"), params, n, k, 2 * k,
                         mm.error_level, rhs, cfg.slack, N, cfg.seed, _ms(t0, cfg))


def check_theorem2(g, n: int, k: int, config: RunConfig | None = None) -> TheoremReport:
    """``||g|| <= (k+1)/C(2k,k) * omega_2k(g, 2 pi alpha / n)`` for g without spectrum in [-n, n]."""
    cfg = _setup(config)
    if n < 2 * k:
        raise DomainError(f"need n >= 2k, got n={n}, k={k}")
    t0 = time.perf_counter()
    N = cfg.grid
    gap = spectrum_gap(g, n, N)
    if gap >= SPECTRUM_GAP_TOL:
        raise InvalidInput(f"{getattr(g, 'label', 'g')} has spectrum {gap:.3e} inside [-{n}, {n}]")
    c = theorem_constants(k)
    delta = 2 * math.pi * ALPHA / n
    lhs = sup_norm(g, N)
    rhs = c.c2 * grid_modulus(g, 2 * k, delta, N, cfg.step_grid)
    params = {"delta": delta, "spectrum_gap": gap, "c2": c.c2}
    return TheoremReport("2", getattr(g, "label", "g"), params, n, k, 2 * k,
                         lhs, rhs, cfg.slack, N, cfg.seed, _ms(t0, cfg))


def check_theorem3(f, k: int, m: int, config: RunConfig | None = None) -> TheoremReport:
    """``||f - v_{k,m} f|| <= 2(k+1)^2/C(2k,k) * omega_2k(f, 2 pi alpha / (km))`` for ``m >= 2``.

    The residual is also checked against the high-pass bound with constant
    ``(k+1)/C(2k,k)``; that result is stored under ``params["residual_check"]``.
    """
    cfg = _setup(config)
    if k < 1 or m < 2:
        raise DomainError("need k >= 1 and m >= 2")
    t0 = time.perf_counter()
    N = cfg.grid
    c = theorem_constants(k)
    delta = 2 * math.pi * ALPHA / (k * m)
    g = highpass_residual(f, k, m, N)
    lhs = sup_norm(g, N)
    rhs = c.c1 * grid_modulus(f, 2 * k, delta, N, cfg.step_grid)
    g_rhs = c.c2 * grid_modulus(g, 2 * k, delta, N, cfg.step_grid)
    params = {"delta": delta, "residual_check": {
        "lhs": lhs, "rhs": g_rhs, "pass": bool(lhs <= g_rhs * (1 + cfg.slack))}}
    return TheoremReport("3", getattr(f, "label", "f"), params, k * m, k, m,
                         lhs, rhs, cfg.slack, N, cfg.seed, _ms(t0, cfg))


def check_theoremF(tau: TrigPoly, n: int, m: int, config: RunConfig | None = None) -> TheoremReport:
    """Bohr-Favard: ``||f|| <= F_m (n+1)^-m ||f^(m)||`` for spectrum outside [-n, n]."""
    cfg = _setup(config)
    if m < 1:
        raise DomainError("derivative order must be >= 1")
    if not isinstance(tau, TrigPoly):
        raise InvalidInput("Bohr-Favard check needs a trigonometric polynomial")
    t0 = time.perf_counter()
    N = cfg.grid
    gap = spectrum_gap(tau, n)
    if gap >= SPECTRUM_GAP_TOL:
        raise InvalidInput(f"{tau.label} has spectrum {gap:.3e} inside [-{n}, {n}]")
    Fm = favard(m)
    lhs = sup_norm(tau, N)
    rhs = Fm * (n + 1) ** -m * sup_norm(tau.derivative(m), N)
    return TheoremReport("F", tau.label, {"favard": Fm, "spectrum_gap": gap}, n, 0, m,
                         lhs, rhs, cfg.slack, N, cfg.seed, _ms(t0, cfg))


# -- oscillation probe -------------------------------------------------------------------

def oscillating_function(env: Envelope, n: int, a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    """``f = g'`` with ``g(u) = env(u) sin(pi n (u-a)/(b-a))``; g vanishes at the n+1 nodes."""
    c0, ca, cb = env.coefficients()
    q = np.arange(1, ca.size + 1)
    L = b - a
    w = math.pi * n / L

    def f(u):
        u = np.asarray(u, dtype=float)
        t = 2 * math.pi * (u - a) / L
        tq = np.multiply.outer(t, q)
        e = c0 + (np.cos(tq) @ ca + np.sin(tq) @ cb if ca.size else 0.0)
        de = (2 * math.pi / L) * (-np.sin(tq) @ (q * ca) + np.cos(tq) @ (q * cb))
        th = w * (u - a)
        return de * np.sin(th) + e * w * np.cos(th)
    return f


def _membership(f, n: int, a: float, b: float, nodes: int = 64) -> float:
    g, gw = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, n + 1)
    parts = []
    for lo, hi in zip(edges, edges[1:]):
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        parts.append(half * float(gw @ f(mid + half * g)))
    cumulative = np.cumsum(parts)
    return float(max(np.max(np.abs(parts)), np.max(np.abs(cumulative))))


def interval_modulus(f, m: int, delta: float, a: float, b: float,
                     M: int = 4097, N_h: int = DEFAULT_STEP_GRID) -> float:
    """``sup |Delta_h^m f(x)|`` over ``|h| < delta`` with every node inside ``[a, b]``."""
    w = binomial_weights(m)
    best = 0.0
    for h in step_grid(delta, N_h)[1:]:
        if m * h > b - a:
            break
        x = np.linspace(a + m * h / 2, b - m * h / 2, M)
        nodes = x[:, None] - (m / 2) * h + h * np.arange(m + 1)
        eps = 8 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
        if nodes.min() < a - eps or nodes.max() > b + eps:
            raise AssertionError("difference node left the interval")
        best = max(best, float(np.max(np.abs(f(np.clip(nodes, a, b)) @ w))))
    return best


def oscillation_probe(env: Envelope, n: int, m: int, a: float = 0.0, b: float = 1.0,
                      config: RunConfig | None = None) -> TheoremReport:
    """Empirical ratio ``||f||_[a,b] / omega_m(f, (b-a)/n)`` for a uniformly oscillating f.

    The report stores ``rhs = (2 + e^-2) * omega``, so a pass means the
    ratio stays below ``2 + e^-2``.  This is evidence only.
    """
    cfg = _setup(config)
    if n < m or m < 1:
        raise DomainError("need n >= m >= 1")
    t0 = time.perf_counter()
    f = oscillating_function(env, n, a, b)
    member = _membership(f, n, a, b)
    if member >= MEMBERSHIP_TOL:
        raise InvalidConstruction(f"subinterval integrals reach {member:.3e}")
    lhs = float(np.max(np.abs(f(np.linspace(a, b, cfg.probe_grid)))))
    omega = interval_modulus(f, m, (b - a) / n, a, b, cfg.probe_grid, cfg.step_grid)
    empirical = 0.0 if lhs == 0 else lhs / omega
    params = {"envelope": asdict(env), "a": a, "b": b, "membership": member,
              "empirical_ratio": empirical, "bound": W_BOUND, "evidence_only": True}
    return TheoremReport("W-probe", f"oscillation[{env.kind}]", params, n, 0, m,
                         lhs, W_BOUND * omega, 0.0, cfg.probe_grid, env.seed, _ms(t0, cfg))


def check_envelope(k_max: int = 200, config: RunConfig | None = None) -> TheoremReport:
    """Largest ``c1(k) 2^(2k - 2.5 log2(2k))`` over ``k <= k_max`` against 4."""
    cfg = _setup(config)
    t0 = time.perf_counter()
    sup = envelope_sup(k_max)
    return TheoremReport("J-envelope", "constants", {"k_max": k_max}, 0, k_max, 2 * k_max,
                         sup, 4.0, 0.0, 0, cfg.seed, _ms(t0, cfg))


# -- sweeps --------------------------------------------------------------------------------

def default_config(theorem: str) -> RunConfig:
    """Acceptance sweep for one theorem."""
    suite = [FamilySpec("harmonic", {"j": 37}), FamilySpec("sawtooth", {"terms": 64}),
             FamilySpec("weierstrass", {"a": 0.5, "b": 3, "terms": 12}),
             FamilySpec("random", {"degree": 24, "seed": 0}), FamilySpec("highpass", {"n": 8})]
    if theorem == "1":
        return RunConfig(families=suite, n=[8, 16, 32, 64], k=[1, 2, 3])
    if theorem == "2":
        return RunConfig(families=[FamilySpec("highpass"),
                                   FamilySpec("random_highpass", {"width": 8, "seed": 0}),
                                   FamilySpec("random_highpass", {"width": 16, "seed": 1})],
                         n=[4, 8, 16, 32], k=[1, 2, 3])
    if theorem == "3":
        return RunConfig(families=suite, k=[1, 2, 3], m=[2, 4, 8])
    if theorem == "F":
        return RunConfig(families=[FamilySpec("highpass"),
                                   FamilySpec("random_highpass", {"width": 8, "seed": 0}),
                                   FamilySpec("random_highpass", {"width": 8, "seed": 1}),
                                   FamilySpec("random_highpass", {"width": 4, "seed": 2})],
                         n=[2, 4, 8], m=[1, 2, 3])
    if theorem == "W":
        return RunConfig(envelopes=[Envelope("const"), Envelope("random", 0), Envelope("random", 1),
                                    Envelope("random", 2)], n=[4, 8, 16], m=[1, 2])
    if theorem == "J":
        return RunConfig(k_max=200)
    raise ConfigError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")


def _on_family(check, fam: FamilySpec, n: int, p: int, cfg: RunConfig) -> TheoremReport:
    return check(fam.build(n), n, p, cfg)


def _residual_job(fam: FamilySpec, k: int, m: int, cfg: RunConfig) -> TheoremReport:
    return check_theorem3(fam.build(), k, m, cfg)


def _jobs(theorem: str, cfg: RunConfig) -> list[Callable[[], TheoremReport]]:
    jobs: list[Callable[[], TheoremReport]] = []

    def tag(fn, fam: FamilySpec, n=None):
        def run():
            rep = fn()
            rep.family = fam.name
            rep.params = {**fam.resolved_params(n), **rep.params}
            rep.seed = int(fam.params.get("seed", cfg.seed))
            return rep
        return run

    if theorem == "1":
        for fam in cfg.families:
            for n in cfg.n:
                def per_n(fam=fam, n=n):
                    f = fam.build()
                    mm = best_approximation(f, n, cfg.grid, cfg.tol)
                    return [tag(lambda k=k: check_theorem1(f, n, k, cfg, mm), fam)()
                            for k in cfg.k if n >= 2 * k]
                jobs.append(per_n)
    elif theorem == "2":
        for fam in cfg.families:
            for n in cfg.n:
                for k in cfg.k:
                    if n >= 2 * k:
                        jobs.append(tag(partial(_on_family, check_theorem2, fam, n, k, cfg), fam, n))
    elif theorem == "3":
        for fam in cfg.families:
            for k in cfg.k:
                for m in cfg.m:
                    jobs.append(tag(partial(_residual_job, fam, k, m, cfg), fam))
    elif theorem == "F":
        for fam in cfg.families:
            for n in cfg.n:
                for m in cfg.m:
                    jobs.append(tag(partial(_on_family, check_theoremF, fam, n, m, cfg), fam, n))
    elif theorem == "W":
        a, b = cfg.interval
        for env in cfg.envelopes:
            for n in cfg.n:
                for m in cfg.m:
                    if n >= m:
                        jobs.append(partial(oscillation_probe, env, n, m, a, b, cfg))
    elif theorem == "J":
        jobs.append(partial(check_envelope, cfg.k_max, cfg))
    else:
        raise ConfigError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    return jobs


def worker_count() -> int:
    cap = os.environ.get("JACKSON_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"JACKSON_THREADS must be an integer, got {cap!r}") from None
    return n


def run(theorem: str, config: RunConfig | None = None) -> list[TheoremReport]:
    """Execute one theorem sweep; reports come back in configuration order."""
    cfg = config if config is not None else default_config(theorem)
    cfg.validate()
    jobs = _jobs(theorem, cfg)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(lambda job: job(), jobs))
    out: list[TheoremReport] = []
    for r in results:
        out.extend(r if isinstance(r, list) else [r])
    return out


# -- serialisation ----------------------------------------------------------------------------

def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def reports_to_json(reports: list[TheoremReport]) -> str:
    return json.dumps([_jsonable(r.to_dict()) for r in reports], indent=2, sort_keys=False)


def reports_to_csv(reports: list[TheoremReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\r\n")
    w.writeheader()
    for r in reports:
        row = _jsonable(r.to_dict())
        row["params"] = json.dumps(row["params"], sort_keys=True)
        row["pass"] = "true" if row["pass"] else "false"
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def write_reports(reports: list[TheoremReport], out_dir, stem: str) -> tuple[Path, Path]:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        jpath, cpath = out / f"{stem}.json", out / f"{stem}.csv"
        jpath.write_text(reports_to_json(reports))
        cpath.write_text(reports_to_csv(reports), newline="")
    except OSError as exc:
        raise OSError(f"cannot write reports under {out}: {exc}") from exc
    return jpath, cpath
