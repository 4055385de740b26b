"""Command-line entry point: ``rankdesign <subcommand> ...``.

Every output file starts with a metadata header carrying the run
configuration, the seed and the toolkit version (the version on a line of
its own so that reproducibility checks can drop it).  Exit codes: 0 on
success, 1 for usage and parse errors, 2 for domain errors such as a
disconnected comparison graph.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (best_cut_bound_exhaustive, cut_bound, degree_bound, edge_connectivity_bound,
                     er_bound, EXHAUSTIVE_CAP)
from .design import criteria, greedy_augment, random_augment
from .errors import (DegenerateDatasetError, DegenerateDegreeError, ExhaustedError, HypothesisViolation,
                     InvalidInputError, NotIdentifiableError, ParseError, RankDesignError, SizeError)
from .experiments import STRATEGIES, SyntheticModel, active_vs_random, paired_one_sided
from .ingest import (LabeledPairwiseData, fmt, ratings_to_pairwise, read_edge_list, read_ratings_csv,
                     write_edge_list)
from .ranking import PairwiseData, lsq_rank, residual_histogram
from .spectral import spectral_cluster

OUTPUT_ENV = "RANKDESIGN_OUTPUT_DIR"
DOMAIN_ERRORS = (NotIdentifiableError, DegenerateDatasetError, DegenerateDegreeError, ExhaustedError,
                 HypothesisViolation, SizeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- headers

def _meta(args, **extra) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "threads")}
    return {"config": config, "seed": getattr(args, "seed", None), **extra}


def _header_lines(meta: dict, comment: str = "#") -> list[str]:
    lines = [f"{comment} version: rankdesign {__version__}"]
    lines.append(f"{comment} config: {json.dumps(meta['config'], sort_keys=True)}")
    for k, v in meta.items():
        if k != "config":
            lines.append(f"{comment} {k}: {json.dumps(v) if not isinstance(v, str) else v}")
    return lines


def _write_csv(path: Path, meta: dict, columns, rows) -> None:
    buf = io.StringIO()
    buf.write("\n".join(_header_lines(meta)) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8")


def _write_json(path: Path, meta: dict, body: dict) -> None:
    doc = {"meta": {**meta, "version": f"rankdesign {__version__}"}, **body}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_edges(path: Path, meta: dict, ld: LabeledPairwiseData, notes=()) -> None:
    write_edge_list(ld, path, header={})
    body = path.read_text(encoding="utf-8")
    head = _header_lines(meta) + [f"# {note}" for note in notes]
    path.write_text("\n".join(head) + "\n" + body, encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _labels_file(path, ld: LabeledPairwiseData) -> list[int]:
    index = ld.index()
    ids = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        lab = line.strip()
        if not lab or lab.startswith("#"):
            continue
        if lab not in index:
            raise ParseError(f"unknown label {lab!r} in {path}", lineno)
        ids.append(index[lab])
    return ids


def _pairs_file(path, ld: LabeledPairwiseData) -> list[tuple[int, int]]:
    index = ld.index()
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise ParseError("expected two labels per line", lineno)
        a, b = (p.strip() for p in parts)
        for lab in (a, b):
            if lab not in index:
                raise ParseError(f"unknown label {lab!r} in {path}", lineno)
        if a == b:
            raise ParseError(f"self-pair {a!r}", lineno)
        pairs.append((index[a], index[b]))
    return pairs


# ---------------------------------------------------------------- commands

def cmd_rank(args) -> None:
    ld = read_edge_list(args.edges)
    try:
        est = lsq_rank(ld.data, tol=args.tol)
    except NotIdentifiableError as exc:
        named = [[ld.labels[v] for v in comp] for comp in exc.components]
        raise NotIdentifiableError("comparison graph is disconnected; scores are not identifiable", named) from None
    hist = residual_histogram(ld.data, est, bins=args.bins)
    meta = _meta(args, relative_residual=float(est.relative_residual),
                 solver_iterations=int(est.solver_iterations))
    order = sorted(range(ld.data.n), key=lambda v: (-round(float(est.phi[v]), 12), ld.labels[v]))
    out = _out_dir(args)
    _write_csv(out / "ranking.csv", meta, ("label", "score"),
               [(ld.labels[v], fmt(round(float(est.phi[v]), 12) + 0.0)) for v in order])
    rows = [(fmt(hist.bin_edges[b]), fmt(hist.bin_edges[b + 1]), int(hist.counts[b]))
            for b in range(len(hist.counts))]
    _write_csv(out / "residual_histogram.csv", meta, ("bin_left", "bin_right", "count"), rows)


def cmd_augment(args) -> None:
    ld = read_edge_list(args.edges)
    forbidden = _pairs_file(args.forbid, ld) if args.forbid else ()
    g = ld.data.graph
    if args.xi < 0:
        raise UsageError("--xi must be nonnegative")
    if args.strategy == "greedy":
        if not g.is_connected():
            comps = [[ld.labels[v] for v in comp] for comp in g.components()]
            raise NotIdentifiableError("greedy augmentation needs a connected graph", comps)
        res = greedy_augment(g, args.xi, forbidden, tol=args.tol)
    else:
        res = random_augment(g, args.xi, forbidden, seed=args.seed, tol=args.tol)
    meta = _meta(args)
    out = _out_dir(args)
    added = [{"i": ld.labels[key.i], "j": ld.labels[key.j], "count": c} for key, c in res.added]
    body = {"strategy": res.strategy, "budget": res.budget, "added": added,
            "lambda2_trajectory": res.lambda2_trajectory,
            "criteria_before": res.criteria_before.as_dict(),
            "criteria_after": res.criteria_after.as_dict()}
    _write_json(out / "design.json", meta, body)
    _write_csv(out / "lambda2_trajectory.csv", meta, ("xi", "lambda2"),
               [(xi, fmt(v)) for xi, v in enumerate(res.lambda2_trajectory)])
    y = {k: v for k, v in ld.data.y.items()}
    y.update({k: 0.0 for k in res.graph.weights if k not in y})
    aug = LabeledPairwiseData(PairwiseData(res.graph, y), ld.labels, ld.metadata)
    notes = ["planned pairs carry their existing mean; new pairs carry a placeholder y of 0"] if args.xi else []
    _write_edges(out / "augmented.tsv", meta, aug, notes)


def cmd_criteria(args) -> None:
    ld = read_edge_list(args.edges)
    _write_json(_out_dir(args) / "criteria.json", _meta(args), {"criteria": criteria(ld.data.graph).as_dict()})


def cmd_bounds(args) -> None:
    if args.edges is None and args.er_bound is None:
        raise UsageError("give an edge list, --er-bound, or both")
    if args.subset and args.edges is None:
        raise UsageError("--subset needs an edge list")
    body: dict = {}
    if args.edges is not None:
        ld = read_edge_list(args.edges)
        g = ld.data.graph
        lo, hi = degree_bound(g)
        body["degree_bound"] = {"min_degree_form": lo, "total_weight_form": hi}
        cut = edge_connectivity_bound(g)
        body["edge_connectivity"] = {"value": cut.value,
                                     "certificate": [ld.labels[v] for v in sorted(cut.certificate)]}
        if args.subset:
            rep = cut_bound(g, _labels_file(args.subset, ld))
            body["cut_bound"] = {"value": rep.value, "subset": [ld.labels[v] for v in sorted(rep.certificate)]}
        if g.n <= EXHAUSTIVE_CAP:
            rep = best_cut_bound_exhaustive(g)
            body["best_cut_bound"] = {"value": rep.value, "subset": [ld.labels[v] for v in sorted(rep.certificate)]}
    if args.er_bound is not None:
        n, p, eps = args.er_bound
        if n != int(n):
            raise UsageError("--er-bound n must be an integer")
        body["er_bound"] = {"n": int(n), "p": p, "eps": eps, "value": er_bound(int(n), p, eps)}
    _write_json(_out_dir(args) / "bounds.json", _meta(args), body)


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def cmd_cluster(args) -> None:
    ld = read_edge_list(args.edges)
    g = ld.data.graph
    res = spectral_cluster(g, args.k, seed=args.seed)
    meta = _meta(args, within_cluster_sum=res.within_cluster_sum, disconnected=res.disconnected)
    out = _out_dir(args)
    _write_csv(out / "clusters.csv", meta, ("label", "cluster"),
               [(lab, int(c)) for lab, c in zip(ld.labels, res.assignments)])
    lines = _header_lines(meta, "//") + ["graph comparisons {"]
    for lab, c in zip(ld.labels, res.assignments):
        lines.append(f"  {_dot_id(lab)} [cluster={int(c)}];")
    for i, j, w in g.edges():
        lines.append(f"  {_dot_id(ld.labels[i])} -- {_dot_id(ld.labels[j])} [weight={w}];")
    lines.append("}")
    (out / "graph.dot").write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class SimulateConfig:
    """Settings for the synthetic active-vs-random experiment.

    ``graph`` is a path to an edge list or the name of a bundled fixture.
    ``xi_max`` of ``None`` means one new comparison per initial pair.
    """

    graph: str = "bridged_cliques_30"
    sigma2: float = 5.0
    score_var: float = 1.0
    seed: int = 0
    trials: int = 100
    xi_max: int | None = None
    checkpoint_step: int = 10
    regenerate: bool = False

    @classmethod
    def from_json(cls, path) -> "SimulateConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise UsageError(f"unknown config keys: {unknown}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def is_int(x):
            return isinstance(x, int) and not isinstance(x, bool)

        if not isinstance(self.graph, str):
            raise UsageError("graph must be a string")
        for name in ("sigma2", "score_var"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
                raise UsageError(f"{name} must be a nonnegative number")
        if not is_int(self.seed) or not is_int(self.trials) or self.trials < 1:
            raise UsageError("seed must be an integer and trials a positive integer")
        if self.xi_max is not None and (not is_int(self.xi_max) or self.xi_max < 0):
            raise UsageError("xi_max must be a nonnegative integer or null")
        if not is_int(self.checkpoint_step) or self.checkpoint_step < 1:
            raise UsageError("checkpoint_step must be a positive integer")
        if not isinstance(self.regenerate, bool):
            raise UsageError("regenerate must be true or false")


def bundled(name: str) -> Path:
    return Path(str(resources.files("rankdesign") / "data" / name))


def load_graph(name: str, base: Path | None = None) -> LabeledPairwiseData:
    """An edge list by path (relative to ``base`` if given) or a bundled fixture name."""
    candidate = bundled(f"{name}.tsv")
    if candidate.is_file():
        return read_edge_list(candidate)
    path = Path(name)
    if base is not None and not path.is_absolute():
        path = base / path
    if not path.is_file():
        raise UsageError(f"no edge list or bundled fixture named {name!r}")
    return read_edge_list(path)


def run_simulation(cfg: SimulateConfig, base: Path | None = None, workers: int = 1):
    ld = load_graph(cfg.graph, base)
    g0 = ld.data.graph
    xi_max = g0.m if cfg.xi_max is None else cfg.xi_max
    marks = sorted(set(range(0, xi_max + 1, cfg.checkpoint_step)) | {xi_max})
    model = SyntheticModel.gaussian(g0.n, float(cfg.sigma2), cfg.seed, float(cfg.score_var))
    return active_vs_random(g0, model, xi_max, cfg.trials, marks, cfg.regenerate, workers=workers)


def cmd_simulate(args) -> None:
    if args.config is None:
        cfg_path = bundled("default_simulate.json")
    else:
        cfg_path = Path(args.config)
    cfg = SimulateConfig.from_json(cfg_path)
    report = run_simulation(cfg, cfg_path.parent, workers=args.threads)
    meta = {"config": asdict(cfg), "seed": cfg.seed}
    out = _out_dir(args)
    _write_csv(out / "simulation.csv", meta, report.COLUMNS,
               [(s, t, xi, fmt(l2), fmt(kt), fmt(lam)) for s, t, xi, l2, kt, lam in report.rows])
    final = report.checkpoints[-1]
    tests = {}
    if cfg.trials > 1:
        for name in ("l2", "ktau"):
            a, b = (report.metric(s, name, final) for s in STRATEGIES)
            stat, p = paired_one_sided(a, b)
            tests[name] = {"statistic": None if np.isnan(stat) else stat, "p_value": None if np.isnan(p) else p}
    body = {"summary": report.summary(), "final_xi": final, "paired_tests_greedy_less": tests,
            "experiment": report.config}
    _write_json(out / "simulation_summary.json", meta, body)


def cmd_ingest_ratings(args) -> None:
    if args.min_reviews < 0:
        raise UsageError("--min-reviews must be nonnegative")
    ld = ratings_to_pairwise(read_ratings_csv(args.ratings), args.min_reviews)
    meta = _meta(args, items_dropped=ld.metadata["items_dropped"])
    _write_edges(_out_dir(args) / "edges.tsv", meta, ld)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or the current directory)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="cap on internal parallelism")

    parser = _Parser(prog="rankdesign", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rankdesign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", parents=[common], help="least-squares scores from an edge list")
    p.add_argument("edges")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("augment", parents=[common], help="plan additional comparisons")
    p.add_argument("edges")
    p.add_argument("--xi", type=int, required=True, help="number of comparisons to add")
    p.add_argument("--strategy", choices=STRATEGIES, default="greedy")
    p.add_argument("--forbid", help="file of label pairs that may not be compared")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("criteria", parents=[common], help="E/A/D criteria of the comparison graph")
    p.add_argument("edges")
    p.set_defaults(func=cmd_criteria)

    p = sub.add_parser("bounds", parents=[common], help="upper bounds on lambda_2")
    p.add_argument("edges", nargs="?")
    p.add_argument("--subset", help="file with one label per line for the cut bound")
    p.add_argument("--er-bound", nargs=3, type=float, metavar=("N", "P", "EPS"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cluster", parents=[common], help="normalized spectral clustering")
    p.add_argument("edges")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("simulate", parents=[common], help="synthetic active-vs-random experiment")
    p.add_argument("config", nargs="?", help="JSON config (default: the bundled one)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ingest-ratings", parents=[common], help="user,item,rating CSV to an edge list")
    p.add_argument("ratings")
    p.add_argument("--min-reviews", type=int, default=0)
    p.set_defaults(func=cmd_ingest_ratings)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    if args.threads < 1:
        print("rankdesign: error: --threads must be positive", file=sys.stderr)
        return 1
    from threadpoolctl import threadpool_limits

    try:
        with threadpool_limits(limits=args.threads):
            args.func(args)
    except NotIdentifiableError as exc:
        comps = "; ".join(",".join(map(str, c)) for c in exc.components)
        print(f"rankdesign: {exc} (components: {comps})", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"rankdesign: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ParseError, InvalidInputError, RankDesignError, OSError) as exc:
        print(f"rankdesign: error: {exc}", file=sys.stderr)
        return 1
    return 0
