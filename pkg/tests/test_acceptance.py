"""End-to-end acceptance checks.

Each test records one PASS/FAIL line through the ``criterion`` fixture; the
lines are printed in the terminal summary.
"""

import json
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest

from fracineq import (
    AS_STATED,
    PROOF_CONSISTENT,
    SweepConfig,
    beta_fn,
    eval_frac_hh_mconvex,
    eval_frac_hh_sconvex,
    eval_frac_trapezoid_sconvex,
    eval_hh_classical,
    eval_hh_mconvex_classical,
    eval_hh_sconvex,
    eval_kirmaci,
    eval_lemma1_identity,
    gamma_fn,
    inc_beta,
    integrate,
    parse_funcspec,
    rl_left,
    rl_right,
    run_sweep,
    sharpness_search,
)
from fracineq.bounds import abs_kernel_difference_integral
from fracineq.harness import DEFAULT_ALPHA, DEFAULT_FUNCTIONS, DEFAULT_INTERVALS

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CONFIG = ROOT / "configs" / "default_sweep.json"
GATED = ("T1", "T2", "h1", "kk", "h2")


@pytest.fixture(scope="module")
def default_sweep():
    return run_sweep(SweepConfig(workers=os.cpu_count() or 1))


def test_c1_power_rule(criterion):
    start = time.perf_counter()
    worst = 0.0
    cases = 0
    for p in (0, 1, 2, 3):
        f = parse_funcspec(f"power:{p}")
        for alpha in (0.5, 1.0, 1.5, 2.0):
            for x in (0.5, 1.0, 2.0):
                exact = gamma_fn(p + 1) / gamma_fn(p + alpha + 1) * x ** (p + alpha)
                worst = max(worst, abs(rl_left(f, 0.0, alpha, x) - exact) / abs(exact))
                cases += 1
    elapsed = time.perf_counter() - start
    ok = cases == 48 and worst <= 1e-8 and elapsed < 5.0
    criterion("C1", ok, f"power rule, {cases} cases, max rel err {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_c2_unit_order_is_plain_integral(criterion):
    worst_plain = worst_oracle = 0.0
    n = 0
    for spec in DEFAULT_FUNCTIONS:
        f = parse_funcspec(spec)
        for a, b in DEFAULT_INTERVALS:
            for x in (a + 0.25 * (b - a), 0.5 * (a + b), b):
                left = rl_left(f, a, 1.0, x)
                worst_plain = max(worst_plain, abs(left - integrate(f, a, x).value))
                oracle = float(mpmath.quad(lambda t: f(float(t)), [a, x]))
                worst_oracle = max(worst_oracle, abs(left - oracle) / max(1.0, abs(oracle)))
                n += 1
            for x in (a, 0.5 * (a + b), b - 0.25 * (b - a)):
                right = rl_right(f, b, 1.0, x)
                worst_plain = max(worst_plain, abs(right - integrate(f, x, b).value))
                n += 1
    ok = worst_plain <= 1e-10 and worst_oracle <= 1e-10
    criterion("C2", ok, f"alpha=1 reduction, {n} evaluations, max err {worst_plain:.1e} (vs mpmath {worst_oracle:.1e})")
    assert ok


def test_c3_trapezoid_identity(criterion):
    start = time.perf_counter()
    worst = 0.0
    cells = 0
    for spec in DEFAULT_FUNCTIONS:
        f = parse_funcspec(spec)
        for a, b in DEFAULT_INTERVALS:
            if not f.derivative_finite_on(a, b):
                continue
            for alpha in DEFAULT_ALPHA:
                worst = max(worst, eval_lemma1_identity(f, a, b, alpha).residual)
                cells += 1
    elapsed = time.perf_counter() - start
    ok = cells >= 100 and worst <= 1e-9 and elapsed < 30.0
    criterion("C3", ok, f"trapezoid identity, {cells} cells, max residual {worst:.1e}, {elapsed:.2f} s")
    assert ok


def _term_gap(pairs) -> float:
    return max(abs(x - y) for x, y in pairs)


def test_c4_unit_order_reductions(criterion):
    a, b = 0.5, 2.0
    gaps = {}
    stated_t2 = 0.0
    specs = ("power:2", "power:3", "exp:1", "exp:-1", "quadratic:0,-1,2", "poly:0,0,1,1")
    for spec in specs:
        for s in (0.25, 0.5, 0.9):
            t1 = eval_frac_hh_sconvex(spec, a, b, s, 1.0)
            e13 = eval_hh_sconvex(spec, a, b, s)
            gaps.setdefault("T1~e13", []).append(_term_gap([
                (t1.terms["lhs"], e13.terms["lhs"]),
                (t1.terms["mid"], e13.terms["mid"]),
                (t1.terms["rhs_as_stated"], e13.terms["rhs"]),
                (t1.terms["rhs_proof_consistent"], e13.terms["rhs"]),
            ]))
            for q in (1.0, 1.5, 2.0, 3.0):
                t2 = eval_frac_trapezoid_sconvex(spec, a, b, s, q, 1.0)
                e14 = eval_kirmaci(spec, a, b, s, q)
                pairs = [(t2.terms["lhs"], e14.terms["lhs"]), (t2.terms["rhs_proof_consistent"], e14.terms["rhs"])]
                if q == 1.0:
                    pairs.append((t2.terms["rhs_as_stated"], e14.terms["rhs"]))
                else:
                    stated_t2 = max(stated_t2, abs(t2.terms["rhs_as_stated"] - e14.terms["rhs"]))
                gaps.setdefault("T2~e14", []).append(_term_gap(pairs))
        for lo, hi in ((0.0, 1.0), (0.0, 2.0), (0.5, 2.0)):
            kk = eval_hh_mconvex_classical(spec, lo, hi, 1.0)
            e1 = eval_hh_classical(spec, lo, hi)
            gaps.setdefault("kk~E1", []).append(
                _term_gap([(kk.terms[k], e1.terms[k]) for k in ("lhs", "mid", "rhs")])
            )
    worst = {k: max(v) for k, v in gaps.items()}
    ok = all(v <= 1e-9 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    criterion("C4", ok, f"reductions: {detail} (T2 unraised display differs by up to {stated_t2:.2e} for q>1)")
    assert ok


def test_c5_proof_consistent_bounds_hold(criterion, default_sweep):
    counts = {t: default_sweep.summary[f"{t}/{PROOF_CONSISTENT}"] for t in GATED}
    violations = sum(c["violated"] for c in counts.values())
    worst = min(c["worst_margin"] for c in counts.values())
    cells = sum(c["holds"] + c["violated"] + c["equality-within-tol"] for c in counts.values())
    ok = violations == 0 and cells > 0
    criterion("C5", ok, f"proof-consistent bounds, {cells} cells, {violations} violations, worst margin {worst:.1e}")
    assert ok


def test_c6_stated_falsification(criterion, default_sweep):
    r = eval_frac_hh_sconvex("power:1", 0.0, 1.0, 1.0, 2.0, AS_STATED)
    cell_ok = (
        abs(r.terms["mid"] - 0.5) <= 1e-9
        and abs(r.terms["rhs_as_stated"] - 0.25) <= 1e-9
        and abs(r.margins["upper"] + 0.25) <= 1e-9
        and r.verdict == "violated"
    )
    high_order = [
        c for c in default_sweep.cells
        if c["theorem_id"] == "T1" and c["variant"] == AS_STATED
        and c["verdict"] == "violated" and c["inputs"]["alpha"] > 1
    ]
    ok = cell_ok and len(high_order) >= 1
    criterion("C6", ok, f"as-stated T1 margin {r.margins['upper']:.12f}, sweep has {len(high_order)} violations at alpha>1")
    assert ok


def test_c7_sconvex_constant_sharp(criterion):
    rec = sharpness_search("e13", "power:s", {"s": [0.25, 0.5, 0.75]})
    worst = max(abs(p["margin"]) for p in rec.points)
    ok = worst <= 1e-9
    criterion("C7", ok, f"x^s equality in the s-convex bound, max |margin| {worst:.1e}")
    assert ok


def test_c8_proof_constants(criterion):
    worst_c = 0.0
    for alpha in DEFAULT_ALPHA:
        with mpmath.workdps(30):
            oracle = mpmath.quad(lambda t: abs((1 - t) ** alpha - t**alpha), [0, 0.5, 1])
        worst_c = max(worst_c, abs(abs_kernel_difference_integral(alpha) - float(oracle)))
    xs = np.linspace(0.0, 1.0, 20)
    ps = np.geomspace(0.05, 20.0, 20)
    worst_r = 0.0
    for x in xs:
        for p in ps:
            for q in ps:
                full = beta_fn(p, q)
                gap = abs(inc_beta(x, p, q) + inc_beta(1.0 - x, q, p) - full) / max(1.0, full)
                worst_r = max(worst_r, gap)
    ok = worst_c <= 1e-10 and worst_r <= 1e-12
    criterion("C8", ok, f"kernel constant err {worst_c:.1e}, incomplete Beta reflection err {worst_r:.1e} (8000 points)")
    assert ok


def test_c9_sweep_json_deterministic(criterion, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        cmd = [sys.executable, "-m", "fracineq", "sweep", "--config", str(DEFAULT_CONFIG),
               "--out", str(out), "--csv", str(tmp_path / f"run{i}.csv"), "--workers", str(os.cpu_count() or 1)]
        proc = subprocess.run(cmd, capture_output=True, text=True, cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    same = outs[0] == outs[1]
    n = json.loads(outs[0])["runtime"]["cells_evaluated"]
    criterion("C9", same, f"two sweep runs over {n} cells, JSON byte-identical: {same}")
    assert same
