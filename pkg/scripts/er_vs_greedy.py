"""lambda_2 against the number of comparisons: ER samples, greedy path growth, and bounds.

Writes a long CSV (kind, m, lambda2) suitable for a scatter plot with the
greedy curve and the 2M/(n-1) ceiling overlaid.
"""

import argparse
import csv
import sys

import numpy as np

from rankdesign.bounds import er_bound
from rankdesign.experiments import er_ensemble, greedy_growth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--samples", type=int, default=200, help="ER draws per p")
    ap.add_argument("--ps", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    n = args.n
    N = n * (n - 1) // 2
    rows = []
    for idx, p in enumerate(args.ps):
        ens = er_ensemble(n, p, args.samples, seed=args.seed + idx)
        rows += [("er", m, lam) for m, lam in ens.rows()]
        if n % 2 == 0:
            rows.append(("er_bound", round(p * N), er_bound(n, p, args.eps)))
    targets = sorted({round(p * N) for p in args.ps} | {n - 1})
    values, _ = greedy_growth(n, targets)
    rows += [("greedy", M, values[M]) for M in targets]
    rows += [("degree_bound", M, 2 * M / (n - 1)) for M in targets]

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    fh.write(f"# n: {n}\n# seed: {args.seed}\n")
    writer.writerow(["kind", "m", "lambda2"])
    writer.writerows((k, m, f"{v:.12g}") for k, m, v in rows)
    if fh is not sys.stdout:
        fh.close()
    for p in args.ps:
        M = round(p * N)
        er = np.mean([v for k, m, v in rows if k == "er" and abs(m - M) <= 3 * np.sqrt(N * p * (1 - p))])
        print(f"p={p:.2f} M~{M}: greedy {values[M]:.3f}  ER mean {er:.3f}  ceiling {2 * M / (n - 1):.3f}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
