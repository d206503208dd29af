"""Run a sweep and print, per theorem and variant, the cells with the most negative margin.

    python scripts/audit_sweep.py --config configs/default_sweep.json --top 3
"""

import argparse
import os
from collections import Counter

from fracineq import SweepConfig, run_sweep
from fracineq.harness import format_summary


def _margin(cell, variant):
    return min(cell["margins"][variant].values())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", default=None)
    ap.add_argument("--top", type=int, default=3)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    cfg.workers = args.workers
    report = run_sweep(cfg)
    print(format_summary(report))

    by_key = {}
    for cell in report.cells:
        if cell["verdict"] == "violated":
            by_key.setdefault((cell["theorem_id"], cell["variant"]), []).append(cell)
    for (theorem, variant), cells in sorted(by_key.items()):
        cells.sort(key=lambda c: _margin(c, variant))
        print(f"\n{theorem} [{variant}]: {len(cells)} violated cells, worst {args.top}:")
        for c in cells[: args.top]:
            inputs = ", ".join(f"{k}={v}" for k, v in c["inputs"].items())
            print(f"  {inputs}  margin {_margin(c, variant):.6g}")

    reasons = Counter(s["reason"].split(" (")[0] for s in report.skipped)
    print("\nskipped cells by reason:")
    for reason, n in reasons.most_common():
        print(f"  {n:5d}  {reason}")


if __name__ == "__main__":
    main()
