"""E/A/D criteria of the bundled clustered fixture after greedy vs random augmentation."""

import argparse

import numpy as np

from rankdesign.cli import load_graph
from rankdesign.design import criteria, greedy_augment, random_augment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default="bridged_cliques_30")
    ap.add_argument("--xi", type=int, nargs="+", default=[0, 25, 50, 100, 212])
    ap.add_argument("--trials", type=int, default=20)
    args = ap.parse_args()

    g = load_graph(args.graph).data.graph
    print(f"{'design':>8} {'xi':>5} {'J_E':>9} {'J_A':>9} {'J_D':>9} {'M':>6}")
    for xi in args.xi:
        c = greedy_augment(g, xi).criteria_after if xi else criteria(g)
        print(f"{'greedy':>8} {xi:>5} {c.j_e:>9.4f} {c.j_a:>9.4f} {c.j_d:>9.4f} {c.t:>6}")
        rs = [random_augment(g, xi, seed=s).criteria_after for s in range(args.trials)]
        means = [np.mean([getattr(r, f) for r in rs]) for f in ("j_e", "j_a", "j_d")]
        print(f"{'random':>8} {xi:>5} {means[0]:>9.4f} {means[1]:>9.4f} {means[2]:>9.4f} {rs[0].t:>6}")


if __name__ == "__main__":
    main()
