"""Parameter sweeps, sharpness searches and report serialization."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path
from typing import Optional

from .bounds import AS_STATED, PROOF_CONSISTENT, THEOREMS, VARIANTS, InequalityReport, evaluate
from .convexity import (
    DEFAULT_GRID_N,
    DEFAULT_RANDOM,
    FuncSpec,
    abs_derivative_power,
    check_convex,
    check_m_convex,
    check_s_convex,
    parse_funcspec,
)
from .fracint import Interval
from .quadrature import Tolerance

log = logging.getLogger(__name__)

DEFAULT_FUNCTIONS = (
    "power:0.5",
    "power:1",
    "power:2",
    "power:3",
    "affine:1,2",
    "quadratic:0,-1,2",
    "exp:1",
    "exp:-1",
    "abs-power:2,1",
    "poly:0,0,1,1",
)
DEFAULT_ALPHA = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)
DEFAULT_S = (0.1, 0.25, 0.5, 0.75, 0.9)
DEFAULT_M = (0.25, 0.5, 0.75, 1.0)
DEFAULT_Q = (1.0, 1.5, 2.0, 3.0)
DEFAULT_INTERVALS = ((0.0, 1.0), (0.5, 2.0), (1.0, 3.0))

# grid name for each theorem parameter
_GRID_OF = {"alpha": "alpha_grid", "s": "s_grid", "m": "m_grid", "q": "q_grid"}


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    theorem_ids: list = field(default_factory=lambda: list(THEOREMS))
    functions: list = field(default_factory=lambda: list(DEFAULT_FUNCTIONS))
    alpha_grid: list = field(default_factory=lambda: list(DEFAULT_ALPHA))
    s_grid: list = field(default_factory=lambda: list(DEFAULT_S))
    m_grid: list = field(default_factory=lambda: list(DEFAULT_M))
    q_grid: list = field(default_factory=lambda: list(DEFAULT_Q))
    intervals: list = field(default_factory=lambda: [list(iv) for iv in DEFAULT_INTERVALS])
    variants: list = field(default_factory=lambda: list(VARIANTS))
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_evals: int = 200_000
    grid_n: int = DEFAULT_GRID_N
    n_random: int = DEFAULT_RANDOM
    seed: int = 0
    workers: int = 1
    out_json: Optional[str] = None
    out_csv: Optional[str] = None

    def __post_init__(self):
        self.validate()

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(self.abs_tol, self.rel_tol, self.max_evals)

    def validate(self) -> None:
        for name in ("theorem_ids", "functions", "alpha_grid", "s_grid", "m_grid", "q_grid", "intervals", "variants"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must be non-empty")
        unknown = [t for t in self.theorem_ids if t not in THEOREMS]
        if unknown:
            raise ConfigError(f"unknown theorem ids {unknown}")
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ConfigError(f"unknown variants {bad}")
        for spec in self.functions:
            try:
                parse_funcspec(spec)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if any(not (a > 0 and math.isfinite(a)) for a in self.alpha_grid):
            raise ConfigError("alpha_grid values must be positive")
        if any(not 0 < s <= 1 for s in self.s_grid):
            raise ConfigError("s_grid values must lie in (0, 1]")
        if any(not 0 < m <= 1 for m in self.m_grid):
            raise ConfigError("m_grid values must lie in (0, 1]")
        if any(not q >= 1 for q in self.q_grid):
            raise ConfigError("q_grid values must be >= 1")
        for iv in self.intervals:
            if len(iv) != 2 or not (0 <= iv[0] < iv[1]):
                raise ConfigError(f"invalid interval {iv!r}; need 0 <= a < b")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            self.tolerance
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        """Build from the JSON config layout (see configs/default_sweep.json)."""
        data = dict(data)
        kwargs = {}
        renames = {"theorems": "theorem_ids"}
        tol = data.pop("tolerance", {}) or {}
        cert = data.pop("certifier", {}) or {}
        out = data.pop("output", {}) or {}
        for key, value in data.items():
            key = renames.get(key, key)
            kwargs[key] = value
        for key, name in (("abs", "abs_tol"), ("rel", "rel_tol"), ("max_evals", "max_evals")):
            if key in tol:
                kwargs[name] = tol[key]
        for key in ("grid_n", "n_random"):
            if key in cert:
                kwargs[key] = cert[key]
        if "json" in out:
            kwargs["out_json"] = out["json"]
        if "csv" in out:
            kwargs["out_csv"] = out["csv"]
        known = {f.name for f in fields(cls)}
        extra = sorted(set(kwargs) - known)
        if extra:
            raise ConfigError(f"unknown config keys {extra}")
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be an object")
        return cls.from_dict(data)


# --- admissibility -----------------------------------------------------------

@lru_cache(maxsize=4096)
def certify(kind: str, spec: str, param: float, a: float, b: float, q: float = 1.0,
            grid_n: int = DEFAULT_GRID_N, n_random: int = DEFAULT_RANDOM, seed: int = 0) -> bool:
    """Is ``spec`` (or |spec'|**q for kinds ending in ``-deriv``) in the class?

    Built-in labels are used when they decide the question; otherwise the
    grid certifier runs.
    """
    f = parse_funcspec(spec)
    dom = Interval(a, b)
    if kind == "convex":
        label = f.convex_label(a, b)
        return label if label is not None else check_convex(f, dom, grid_n, seed, n_random).holds
    if kind == "s-convex":
        label = f.s_convex_label(param, a, b)
        return label if label is not None else check_s_convex(f, param, dom, grid_n, seed, n_random).holds
    if kind == "s-convex-deriv":
        g = abs_derivative_power(f, q)
        return check_s_convex(g, param, dom, grid_n, seed, n_random).holds
    if kind == "m-convex":
        label = f.m_convex_label(param, b)
        return label if label is not None else check_m_convex(f, param, dom, grid_n, seed, n_random).holds
    raise ValueError(f"unknown class {kind!r}")


def admissibility(theorem: str, f: FuncSpec, a: float, b: float, params: dict, cfg: SweepConfig) -> Optional[str]:
    """Reason the cell violates the theorem's hypotheses, or None."""
    spec = str(f)
    kw = dict(grid_n=cfg.grid_n, n_random=cfg.n_random, seed=cfg.seed)
    if not f.covers(a, b):
        return f"{spec} undefined on [{a}, {b}]"
    if theorem == "E1":
        return None if certify("convex", spec, 1.0, a, b, **kw) else "f not convex"
    if theorem in ("e13", "T1"):
        s = params["s"]
        return None if certify("s-convex", spec, s, a, b, **kw) else f"f not s-convex (s={s})"
    if theorem in ("e14", "T2", "L1"):
        if not f.derivative_finite_on(a, b):
            return "f' unbounded on [a, b]"
        if theorem == "L1":
            return None
        s, q = params["s"], params["q"]
        ok = certify("s-convex-deriv", spec, s, a, b, q=q, **kw)
        return None if ok else f"|f'|^{q} not s-convex (s={s})"
    if theorem in ("h1", "kk", "h2"):
        m = params["m"]
        top = b if theorem == "h2" else max(b, b / m)
        if not f.covers(0.0, top):
            return f"{spec} undefined on [0, {top}]"
        return None if certify("m-convex", spec, m, 0.0, top, **kw) else f"f not m-convex (m={m}) on [0, {top}]"
    raise ValueError(theorem)


# --- cells ---------------------------------------------------------------------

def _cells(cfg: SweepConfig):
    """Canonically ordered (theorem, f, a, b, params) tuples."""
    for theorem in cfg.theorem_ids:
        names = THEOREMS[theorem][1]
        grids = [getattr(cfg, _GRID_OF[n]) for n in names]
        for spec in cfg.functions:
            for a, b in cfg.intervals:
                for combo in itertools.product(*grids):
                    yield theorem, spec, float(a), float(b), {n: float(v) for n, v in zip(names, combo)}


def _evaluate_cell(job):
    theorem, spec, a, b, params, tol = job
    return evaluate(theorem, spec, a, b, params, AS_STATED, tol)


@dataclass
class SweepReport:
    cells: list
    skipped: list
    summary: dict
    runtime: dict

    def to_dict(self) -> dict:
        return {"cells": self.cells, "skipped": self.skipped, "summary": self.summary, "runtime": self.runtime}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for cell in self.cells:
            writer.writerow(_csv_row(cell))
        return buf.getvalue()

    def violations(self, theorem: str, variant: str) -> list:
        return [c for c in self.cells if c["theorem_id"] == theorem and c["variant"] == variant
                and c["verdict"] == "violated"]


CSV_COLUMNS = (
    "theorem", "variant", "f", "a", "b", "alpha", "s", "m", "q",
    "lhs_name", "lhs", "mid_name", "mid", "rhs_name", "rhs",
    "margin_lower", "margin_upper", "residual", "verdict", "tol_used",
)


def _csv_row(cell: dict) -> list:
    inp = cell["inputs"]
    chain = cell["chains"][cell["variant"]]
    terms = cell["terms"]
    names = [chain[0], chain[1] if len(chain) == 3 else "", chain[-1]]
    margins = cell["margins"]
    own = margins.get(cell["variant"], {}) if cell["kind"] == "chain" else {}
    return [
        cell["theorem_id"], cell["variant"], inp["f"], inp["a"], inp["b"],
        inp.get("alpha", ""), inp.get("s", ""), inp.get("m", ""), inp.get("q", ""),
        names[0], terms[names[0]], names[1], terms[names[1]] if names[1] else "", names[2], terms[names[2]],
        own.get("lower", ""), own.get("upper", ""), margins.get("residual", ""),
        cell["verdict"], cell["tol_used"],
    ]


def worst_margin(report: InequalityReport) -> float:
    if report.kind == "identity":
        return -report.residual
    return min(report.margins.values())


def run_sweep(cfg: SweepConfig) -> SweepReport:
    """Evaluate every admissible cell of ``cfg`` for every selected variant.

    Output is deterministic in ``cfg``: cells are evaluated independently and
    collected in canonical order whatever the worker count.
    """
    cfg.validate()
    tol = cfg.tolerance
    jobs, skipped = [], []
    for theorem, spec, a, b, params in _cells(cfg):
        f = parse_funcspec(spec)
        reason = admissibility(theorem, f, a, b, params, cfg)
        if reason is None:
            jobs.append((theorem, str(f), a, b, params, tol))
        else:
            log.info("skip %s %s [%s, %s] %s: %s", theorem, spec, a, b, params, reason)
            skipped.append({"theorem_id": theorem, "f": str(f), "a": a, "b": b, "params": params, "reason": reason})

    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            reports = list(pool.map(_evaluate_cell, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        reports = [_evaluate_cell(job) for job in jobs]

    cells = []
    summary: dict = {}
    for report in reports:
        for variant in cfg.variants:
            r = report.with_variant(variant)
            d = r.to_dict()
            cells.append(d)
            key = f"{r.theorem_id}/{variant}"
            entry = summary.setdefault(
                key, {"holds": 0, "violated": 0, "equality-within-tol": 0, "worst_margin": None, "worst_cell": None}
            )
            entry[r.verdict] += 1
            wm = worst_margin(r)
            if entry["worst_margin"] is None or wm < entry["worst_margin"]:
                entry["worst_margin"] = wm
                entry["worst_cell"] = dict(r.inputs)
    runtime = {"cells_evaluated": len(reports), "cells_skipped": len(skipped), "reports": len(cells)}
    return SweepReport(cells, skipped, summary, runtime)


def write_outputs(report: SweepReport, out_json=None, out_csv=None) -> None:
    if out_json:
        Path(out_json).write_text(report.to_json())
    if out_csv:
        Path(out_csv).write_text(report.to_csv())


def format_summary(report: SweepReport) -> str:
    lines = [f"{'theorem/variant':<24}{'holds':>7}{'equal':>7}{'violated':>10}  worst margin"]
    for key in sorted(report.summary):
        e = report.summary[key]
        lines.append(
            f"{key:<24}{e['holds']:>7}{e['equality-within-tol']:>7}{e['violated']:>10}  {e['worst_margin']:.6g}"
        )
    rt = report.runtime
    lines.append(f"{rt['cells_evaluated']} cells evaluated, {rt['cells_skipped']} skipped")
    return "\n".join(lines)


# --- sharpness -----------------------------------------------------------------

@dataclass
class SharpnessRecord:
    theorem_id: str
    family: str
    variant: str
    min_margin: float
    argmin: dict
    points: list


def _instantiate(template: str, point: dict) -> str:
    family, _, rest = template.partition(":")
    toks = [repr(float(point[t])) if t in point else t for t in rest.split(",")]
    return f"{family}:{','.join(toks)}"


def sharpness_search(
    theorem_id: str,
    family: str,
    param_grid: dict,
    interval: tuple = (0.0, 1.0),
    variant: str = PROOF_CONSISTENT,
    fixed: Optional[dict] = None,
    tol: Tolerance = Tolerance(),
) -> SharpnessRecord:
    """Minimise the right-hand margin of ``theorem_id`` over ``param_grid``.

    ``family`` is a FuncSpec template whose parameters may name grid keys,
    e.g. ``"power:s"`` ties the exponent to ``s``.
    """
    if theorem_id not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    if theorem_id == "L1":
        raise ValueError("L1 is an identity and has no right-hand margin")
    if not param_grid:
        param_grid = {}
    keys = list(param_grid)
    if any(len(param_grid[k]) == 0 for k in keys):
        raise ConfigError("sharpness grids must be non-empty")
    a, b = interval
    points = []
    for combo in itertools.product(*(param_grid[k] for k in keys)):
        point = dict(fixed or {})
        point.update({k: float(v) for k, v in zip(keys, combo)})
        spec = _instantiate(family, point)
        report = evaluate(theorem_id, spec, a, b, point, variant, tol)
        points.append({"params": point, "f": spec, "margin": report.margins["upper"]})
    if not points:
        raise ConfigError("empty parameter grid")
    best = min(points, key=lambda p: p["margin"])
    return SharpnessRecord(theorem_id, family, variant, best["margin"], best["params"], points)
