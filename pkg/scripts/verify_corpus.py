"""Run the invariant suite over a seeded corpus and print a table.

    python3 scripts/verify_corpus.py --seed 42 --count 100 --json report.json
"""

import argparse
import json
import time

from jacobikit.config import DEFAULT, ToleranceConfig
from jacobikit.corpus import CorpusSpec
from jacobikit.verify import run_verification


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--n-min", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--config", help="tolerance overrides (JSON)")
    ap.add_argument("--json", help="write the full report here")
    args = ap.parse_args()

    cfg = ToleranceConfig.from_file(args.config) if args.config else DEFAULT
    t0 = time.perf_counter()
    report = run_verification(CorpusSpec(args.seed, args.count, args.n_min, args.n_max), cfg, args.workers)
    elapsed = time.perf_counter() - t0

    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        mark = "ok  " if c.passed else "FAIL"
        print(f"{mark} {c.name:<{width}}  {c.max_residual:10.3e} / {c.threshold:<8g} {c.cases:6d} cases  {c.detail}")
    print(f"\n{'all checks passed' if report.passed else 'some checks failed'} in {elapsed:.1f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)


if __name__ == "__main__":
    main()
