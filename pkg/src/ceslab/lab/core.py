"""Case registry, suite configuration, samplers and the parallel runner."""
from __future__ import annotations

import math
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from ..spaces import HALF, UNIT, PCFun, Seq, SpaceError

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"

DEFAULT_TOLERANCES = {
    "exact": 1e-12,
    "identity": 1e-9,
    "quadrature": 1e-3,
    "solver": 1e-4,
}


@dataclass
class SuiteConfig:
    suite: str
    seed: int = 42
    samples: int = 100
    n: int = 64
    cells: int = 64
    eps: float = 1e-6
    tmax: float = 1e6
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "json"
    timing: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise SpaceError("sample count must be at least 1")
        if self.n < 2 or self.cells < 2:
            raise SpaceError("n and cells must be at least 2")
        if not (0 < self.eps < self.tmax):
            raise SpaceError("need 0 < eps < tmax")
        if self.fmt not in ("json", "csv", "text"):
            raise SpaceError(f"unsupported format {self.fmt!r}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise SpaceError(f"unknown tolerance keys {sorted(unknown)}")

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def echo(self) -> dict:
        d = asdict(self)
        for k in ("suite", "seed", "out", "timing"):
            d.pop(k)
        d["tolerances"] = {k: self.tol(k) for k in sorted(DEFAULT_TOLERANCES)}
        return d


@dataclass
class Case:
    name: str
    status: str
    observed: Any
    bound: Any
    tolerance: Any
    paperRef: str
    witness: Any = None
    detail: dict | None = None


@dataclass
class Report:
    suite: str
    seed: int
    config: dict
    cases: list
    elapsedSeconds: float | None = None

    @property
    def summary(self) -> dict:
        out = {PASS: 0, FAIL: 0, FLAGGED: 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.summary[FAIL] == 0


# ---------------------------------------------------------------------------
# registry


@dataclass
class CaseSpec:
    suite: str
    name: str
    claim: str
    fn: Callable


REGISTRY: dict[str, list[CaseSpec]] = {}


def case(suite: str, name: str, claim: str):
    """Register ``fn(ctx) -> Case | list[Case]`` under ``suite``."""
    def deco(fn):
        REGISTRY.setdefault(suite, []).append(CaseSpec(suite, name, claim, fn))
        return fn
    return deco


class Context:
    """What a case function sees: config, its own RNG and result helpers."""

    def __init__(self, cfg: SuiteConfig, spec: CaseSpec):
        self.cfg = cfg
        self.spec = spec
        self.rng = np.random.default_rng([cfg.seed, zlib.crc32(spec.name.encode())])

    # result helpers -------------------------------------------------------

    def make(self, status, observed, bound, tol, witness=None, detail=None, suffix=None):
        name = self.spec.name if suffix is None else f"{self.spec.name}.{suffix}"
        if status == FAIL and witness is None:
            witness = {"seed": self.cfg.seed}
        return Case(name, status, _clean(observed), _clean(bound), _clean(tol), self.spec.claim,
                    _clean(witness), _clean(detail))

    def le(self, observed, bound, tol=0.0, witness=None, detail=None, suffix=None, rel=True):
        """Pass when ``observed <= bound`` up to ``tol`` (relative to ``|bound|`` if ``rel``)."""
        slack = tol * (abs(bound) if rel and math.isfinite(bound) else 1.0)
        ok = observed <= bound + slack
        return self.make(PASS if ok else FAIL, observed, bound, tol, None if ok else witness, detail, suffix)

    def close(self, observed, expected, rtol, witness=None, detail=None, suffix=None):
        err = abs(observed - expected) / max(abs(expected), 1e-300)
        ok = err <= rtol
        d = {"expected": expected, "relError": err}
        if detail:
            d.update(detail)
        return self.make(PASS if ok else FAIL, observed, expected, rtol, None if ok else witness, d, suffix)

    def envelope(self, ratios, refined, limit=10.0, drift=0.05, witness=None, suffix=None):
        """Ratio envelope: ``max/min < limit`` and refinement drift of both ends below ``drift``."""
        r = np.asarray(ratios, float)
        rr = np.asarray(refined, float)
        lo, hi = float(np.min(r)), float(np.max(r))
        spread = hi / lo if lo > 0 else math.inf
        lo2, hi2 = float(np.min(rr)), float(np.max(rr))
        change = max(abs(lo2 / lo - 1), abs(hi2 / hi - 1)) if lo > 0 else math.inf
        ok = spread < limit and change < drift
        detail = {"min": lo, "max": hi, "refinedMin": lo2, "refinedMax": hi2,
                  "refinementChange": change, "samples": int(r.size)}
        if not ok and witness is None:
            witness = {"worst": int(np.argmax(r))}
        return self.make(PASS if ok else FAIL, spread, limit, drift, None if ok else witness, detail, suffix)

    def flag(self, observed, note, bound=None, detail=None, suffix=None):
        d = {"note": note}
        if detail:
            d.update(detail)
        return self.make(FLAGGED, observed, bound, None, None, d, suffix)

    # samplers ---------------------------------------------------------------

    def seq(self, n=None, heavy=True) -> Seq:
        n = int(self.rng.integers(2, (n or self.cfg.n) + 1))
        return Seq(sample_values(self.rng, n, heavy))

    def fn_half(self, cells=None, lo=None, hi=None) -> PCFun:
        cells = cells or self.cfg.cells
        lo = lo if lo is not None else max(self.cfg.eps, 10 ** self.rng.uniform(-3, -1))
        hi = hi if hi is not None else min(self.cfg.tmax, 10 ** self.rng.uniform(0.5, 2))
        x = np.geomspace(lo, hi, cells + 1)
        return PCFun(x, sample_values(self.rng, cells, True, zeros=False), HALF)

    def fn_unit(self, cells=None, lo=None) -> PCFun:
        cells = cells or self.cfg.cells
        lo = lo if lo is not None else 10 ** self.rng.uniform(-4, -1)
        x = np.geomspace(lo, 1.0, cells + 1)
        return PCFun(x, sample_values(self.rng, cells, True, zeros=False), UNIT)


def sample_values(rng, n, heavy=True, zeros=True) -> np.ndarray:
    """Nonnegative values with heavy-tailed magnitudes and occasional zeros."""
    v = rng.pareto(1.5, n) + 0.05 if heavy else rng.exponential(size=n)
    if zeros and n > 2:
        v = v * (rng.random(n) > 0.2)
        if not np.any(v):
            v[0] = 1.0
    return v


def _clean(x):
    """JSON-friendly copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def witness_of(x) -> dict:
    """Serialise an element for replay."""
    if isinstance(x, Seq):
        return {"kind": "seq", "values": x.values.tolist()}
    if isinstance(x, PCFun):
        return {"kind": "fn", "domain": x.domain, "x": x.breakpoints.tolist(), "values": x.values.tolist()}
    return {"value": x}


# ---------------------------------------------------------------------------
# runner


def suite_names() -> list[str]:
    from . import suites  # noqa: F401  (registers cases)
    return sorted(REGISTRY)


def _workers() -> int:
    env = os.environ.get("CESLAB_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise SpaceError("CESLAB_THREADS must be an integer") from None
    return cap


def _run_one(cfg: SuiteConfig, spec: CaseSpec) -> list[Case]:
    ctx = Context(cfg, spec)
    try:
        out = spec.fn(ctx)
    except Exception as exc:  # a crashing case is a failing case
        return [Case(spec.name, FAIL, None, None, None, spec.claim,
                     {"seed": cfg.seed, "error": f"{type(exc).__name__}: {exc}"})]
    return out if isinstance(out, list) else [out]


def run_suite(cfg: SuiteConfig) -> Report:
    """Run every case of ``cfg.suite``; cases are merged in name order."""
    names = suite_names()
    if cfg.suite not in names:
        raise SpaceError(f"unknown suite {cfg.suite!r}; known: {', '.join(names)}")
    specs = sorted(REGISTRY[cfg.suite], key=lambda s: s.name)
    t0 = time.perf_counter()
    workers = min(_workers(), len(specs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(lambda s: _run_one(cfg, s), specs))
    else:
        groups = [_run_one(cfg, s) for s in specs]
    cases = sorted((c for g in groups for c in g), key=lambda c: c.name)
    elapsed = time.perf_counter() - t0 if cfg.timing else None
    return Report(cfg.suite, cfg.seed, cfg.echo(), cases, elapsed)
