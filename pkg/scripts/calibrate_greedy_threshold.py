"""One-time pilot for the greedy-quality acceptance threshold.

Grows the path on 50 vertices greedily to M = 490 comparisons and records
lambda_2 / (2M / (n - 1)).  The frozen threshold is the pilot ratio less a
2% allowance for platform-dependent floating-point tie breaks.  Rerunning
overwrites tests/data/greedy_threshold.json.
"""

import argparse
import json
import math
from pathlib import Path

from rankdesign.experiments import greedy_growth

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--M", type=int, default=490)
    ap.add_argument("--allowance", type=float, default=0.02)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "data" / "greedy_threshold.json")
    args = ap.parse_args()

    values, _ = greedy_growth(args.n, [args.M])
    lam2 = values[args.M]
    bound = 2 * args.M / (args.n - 1)
    ratio = lam2 / bound
    threshold = math.floor(ratio * (1 - args.allowance) * 1000) / 1000
    doc = {"n": args.n, "M": args.M, "pilot_lambda2": lam2, "bound": bound, "pilot_ratio": ratio,
           "allowance": args.allowance, "threshold": threshold,
           "generator": "scripts/calibrate_greedy_threshold.py"}
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
