"""Run all five experiments at their default sizes and merge the reports.

    python3 scripts/run_all.py [--outdir results] [--seed 0] [--quick]

``--quick`` shrinks the sample counts for a smoke run. Exit status is the
merged verdict (0 all pass, 2 any failure).
"""
import argparse
import sys
from pathlib import Path

from selfembezzle.cli import main as cli
from selfembezzle.config import EXPERIMENTS

QUICK = {
    "e2-nogo": ["--samples", "100"],
    "e4-car": ["--window", "4", "--samples", "2000"],
    "e5-channel": ["--samples", "100"],
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in EXPERIMENTS:
        extra = QUICK.get(name, []) if args.quick else []
        code = cli([name, "--seed", str(args.seed), "--out", str(out / name), "--format", "json,csv,svg", *extra])
        print(f"{name}: exit {code}")
    reports = [str(out / f"{name}.json") for name in EXPERIMENTS]
    return cli(["report", *reports, "--out", str(out / "summary.json")])


if __name__ == "__main__":
    sys.exit(main())
