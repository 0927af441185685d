"""Command-line entry point: ``metric-backbone <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import backbone as bb
from . import cluster, experiments, sparsify, transforms, wsbm
from .graph import Mode, Partition
from .io import read_edge_list, read_labels, read_point_cloud, write_edge_list, write_json, write_labels


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _matrix(text: str) -> np.ndarray:
    """``"6,2;2,6"`` -> 2x2 array."""
    rows = [[float(x) for x in r.split(",")] for r in text.split(";") if r.strip()]
    return np.array(rows)


def cmd_backbone(args) -> int:
    g, ids = read_edge_list(args.input, Mode.PROXIMITY if args.proximity else Mode.COST)
    cost = transforms.proximity_to_distance(g) if args.proximity else g
    t0 = time.perf_counter()
    if args.approx_roots is not None:
        roots = args.approx_roots if args.approx_roots > 0 else None
        res = bb.approximate_backbone(cost, num_roots=roots, seed=args.seed)
    else:
        res = bb.metric_backbone(cost)
    ms = 1000.0 * (time.perf_counter() - t0)
    write_edge_list(args.output, g.edge_subgraph(res.kept), ids)
    report = {
        "n": g.n,
        "m_original": g.m,
        "m_backbone": int(res.kept.sum()),
        "retention_ratio": res.retention_ratio,
        "wall_time_ms": ms,
        "approximate": args.approx_roots is not None,
        "roots_used": int(res.roots_used.size),
    }
    if args.report:
        write_json(args.report, report)
    return 0


def _wsbm_from_args(args) -> wsbm.WsbmParams:
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
        return wsbm.params_from_dict(cfg.get("wsbm", cfg))
    if args.n is None or args.B is None:
        raise SystemExit("wsbm sample: --n and --B are required without --config")
    B = _matrix(args.B)
    k = B.shape[0]
    pi = np.array(_floats(args.pi)) if args.pi else np.full(k, 1.0 / k)
    rho = args.rho if args.rho is not None else wsbm.default_rho(args.n, args.rho_exponent)
    laws = [wsbm.CostDistribution.parse(c) for c in args.costs.split(",")]
    if len(laws) == 1:
        costs = laws[0]
    elif len(laws) == k * (k + 1) // 2:
        # upper triangle, row major
        costs = [[None] * k for _ in range(k)]
        it = iter(laws)
        for a in range(k):
            for b in range(a, k):
                costs[a][b] = costs[b][a] = next(it)
    elif len(laws) == k * k:
        costs = [laws[a * k:(a + 1) * k] for a in range(k)]
    else:
        raise SystemExit(f"--costs needs 1, {k * (k + 1) // 2} or {k * k} laws")
    return wsbm.WsbmParams(args.n, pi, B, rho, costs)


def cmd_wsbm_sample(args) -> int:
    params = _wsbm_from_args(args)
    z, g = wsbm.sample_wsbm(params, args.seed)
    write_edge_list(args.out_edges, g, header=f"wsbm n={params.n} k={params.k} rho={params.rho!r} seed={args.seed}")
    if args.out_labels:
        write_labels(args.out_labels, z)
    return 0


def cmd_knn(args) -> int:
    cloud = read_point_cloud(args.input, args.label_col)
    g = transforms.knn_graph(cloud, args.q, args.kernel)
    write_edge_list(args.out, g, header=f"{args.q}-NN {args.kernel} proximity graph")
    return 0


def cmd_sparsify(args) -> int:
    g, ids = read_edge_list(args.input, Mode.PROXIMITY)
    labels = read_labels(args.labels, ids) if args.labels else None
    if args.match_backbone:
        m_target = int(bb.metric_backbone(transforms.proximity_to_distance(g)).kept.sum())
    else:
        m_target = args.m_target
    if args.method == "threshold":
        out, rep = sparsify.threshold_sparsify(g, m_target, labels)
    else:
        out, rep = sparsify.spectral_sparsify(g, m_target, seed=args.seed, labels=labels)
    write_edge_list(args.out, out, ids)
    if args.report:
        write_json(args.report, rep.to_dict())
    return 0


def cmd_cluster(args) -> int:
    g, ids = read_edge_list(args.input, Mode.PROXIMITY if args.proximity else Mode.COST)
    res = cluster.spectral_clustering(g, args.k, restarts=args.restarts, seed=args.seed)
    write_labels(args.out, res.labels, ids)
    report = {"k": args.k, "eigenvalues": res.embedding.values.tolist(), "inertia": res.inertia}
    if args.labels:
        truth = read_labels(args.labels, ids)
        report["loss"] = cluster.clustering_loss(truth, res.labels, max(truth.k, args.k))
        report["ari"] = cluster.adjusted_rand_index(truth, res.labels)
    if args.report:
        write_json(args.report, report)
    return 0


def cmd_experiment_run(args) -> int:
    if Path(args.config).exists():
        config = experiments.ExperimentConfig.load(args.config)
    elif args.config in experiments.PRESETS:
        config = experiments.preset(args.config)
    else:
        raise SystemExit(f"no config file or preset named {args.config!r}")
    if args.seeds:
        config.seeds = [int(s) for s in args.seeds.split(",")]
    _, checks = experiments.run_experiment(config, args.out_dir)
    failed = [c for c in checks if c.get("acceptance", True) and not c["passed"]]
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['metric']} ({c['scope']}) observed={c['observed']} range=[{c.get('lo', '-inf')}, {c.get('hi', 'inf')}]")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="metric-backbone", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("backbone", help="extract the metric backbone of an edge list")
    b.add_argument("--input", required=True)
    b.add_argument("--output", required=True)
    b.add_argument("--report")
    b.add_argument("--approx-roots", type=int, help="union of shortest-path trees from R random roots (0: ceil(2 ln n))")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--proximity", action="store_true", help="weights are similarities; converted with 1/p - 1")
    b.set_defaults(func=cmd_backbone)

    w = sub.add_parser("wsbm", help="weighted stochastic block model")
    wsub = w.add_subparsers(dest="wsbm_command", required=True)
    s = wsub.add_parser("sample", help="draw one wSBM graph")
    s.add_argument("--config", help="JSON parameter file (overrides the flags below)")
    s.add_argument("--n", type=int)
    s.add_argument("--pi", help="block weights, comma separated (default uniform)")
    s.add_argument("--B", help="rows separated by ';', entries by ','")
    s.add_argument("--rho", type=float)
    s.add_argument("--rho-exponent", type=float, default=2.0, help="rho = (log n)^e / n")
    s.add_argument("--costs", default="exp:1", help="one law, the upper triangle, or all k*k laws, e.g. exp:1,unif:2")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-edges", required=True)
    s.add_argument("--out-labels")
    s.set_defaults(func=cmd_wsbm_sample)

    k = sub.add_parser("knn", help="q-nearest-neighbour proximity graph of a point cloud")
    k.add_argument("--input", required=True)
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--kernel", choices=("gaussian", "angular"), default="gaussian")
    k.add_argument("--label-col")
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_knn)

    sp_ = sub.add_parser("sparsify", help="threshold or spectral sparsification of a proximity graph")
    sp_.add_argument("--method", choices=("threshold", "spectral"), required=True)
    budget = sp_.add_mutually_exclusive_group(required=True)
    budget.add_argument("--match-backbone", action="store_true")
    budget.add_argument("--m-target", type=int)
    sp_.add_argument("--input", required=True)
    sp_.add_argument("--out", required=True)
    sp_.add_argument("--report")
    sp_.add_argument("--labels")
    sp_.add_argument("--seed", type=int, default=0)
    sp_.set_defaults(func=cmd_sparsify)

    c = sub.add_parser("cluster", help="adjacency spectral clustering")
    c.add_argument("--input", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=10)
    c.add_argument("--labels")
    c.add_argument("--out", required=True)
    c.add_argument("--report")
    c.add_argument("--proximity", action="store_true")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("experiment", help="reproducible experiment sweeps")
    esub = e.add_subparsers(dest="experiment_command", required=True)
    r = esub.add_parser("run")
    r.add_argument("--config", required=True, help=f"JSON file or preset name ({', '.join(experiments.PRESETS)})")
    r.add_argument("--out-dir", required=True)
    r.add_argument("--seeds", help="override seeds, comma separated")
    r.set_defaults(func=cmd_experiment_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
