"""Command-line interface.

Subcommands: `generate` writes fixture files, `estimate` runs one
estimator on an input file and emits a JSON result, `bench` runs the
classic benchmark table.

Exit codes: 0 success, 2 usage or parse error, 3 undefined dimension,
4 singular similarity, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import estimators, io, magnitude, spaces
from .errors import (
    DegenerateInputError,
    FracdimError,
    ParseError,
    ResourceLimitError,
    SingularSimilarityError,
    UndefinedDimensionError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNDEFINED_DIMENSION = 3
EXIT_SINGULAR_SIMILARITY = 4
EXIT_RESOURCE_LIMIT = 5


class UsageError(FracdimError):
    pass


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracdim",
        description="Fractal dimension estimation for point clouds and weighted networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate fixture point clouds and networks")
    gen.add_argument("kind", choices=["sierpinski-triangle", "cantor", "sierpinski-tree", "line"])
    gen.add_argument("--level", type=int, default=None, help="iteration level (triangle, cantor)")
    gen.add_argument("--levels", type=int, default=None, help="recursion levels (sierpinski-tree)")
    gen.add_argument("--s", type=int, default=3, help="copies per level (sierpinski-tree)")
    gen.add_argument("--f", type=float, default=0.5, help="weight scaling factor (sierpinski-tree)")
    gen.add_argument("--n", type=int, default=None, help="node count (line)")
    gen.add_argument("--out", default=None, help="output path (default: stdout)")

    est = sub.add_parser("estimate", help="run one estimator on an input file")
    est.add_argument(
        "estimator",
        choices=[
            "box",
            "correlation",
            "ph-dim",
            "magnitude-dim",
            "alpha-magnitude-dim",
            "internal-scaling",
            "network-ph-dim",
        ],
    )
    est.add_argument("--input", required=True, help="point CSV or edge-list file")
    est.add_argument("--kind", choices=["cloud", "network"], default=None,
                     help="input kind (default: sniffed from content)")
    est.add_argument("--seed", type=int, default=42)
    est.add_argument("--threads", type=int, default=None)
    est.add_argument("--out", default=None)
    est.add_argument("--format", choices=["json", "csv"], default="json")
    # eps-grid estimators
    est.add_argument("--eps-min", type=float, default=None)
    est.add_argument("--eps-max", type=float, default=None)
    est.add_argument("--eps-count", type=int, default=12)
    est.add_argument("--fit-lo", type=int, default=None)
    est.add_argument("--fit-hi", type=int, default=None)
    # ph-dim family
    est.add_argument("--degree", type=int, default=0)
    est.add_argument("--alpha", type=float, default=1.0)
    est.add_argument("--n-min", type=int, default=5)
    est.add_argument("--n-max", type=int, default=200)
    est.add_argument("--n-step", type=int, default=5)
    est.add_argument("--repeats", type=int, default=5)
    est.add_argument("--fit-tail", type=int, default=36)
    est.add_argument("--max-dim", type=int, default=None)
    # magnitude family
    est.add_argument("--t-min", type=float, default=1.0)
    est.add_argument("--t-max", type=float, default=300.0)
    est.add_argument("--t-step", type=float, default=1.0)
    est.add_argument("--max-degree", type=int, default=1)
    # internal scaling
    est.add_argument("--node", default="all", help="node id or 'all'")

    bench = sub.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("suite", choices=["classic"])
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--threads", type=int, default=None)
    bench.add_argument("--format", choices=["text", "json", "csv"], default="text")
    bench.add_argument("--out", default=None)

    return parser


def _write_output(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# generate


def _cmd_generate(args):
    if args.kind == "sierpinski-triangle":
        if args.level is None:
            raise UsageError("sierpinski-triangle requires --level")
        cloud = spaces.sierpinski_triangle(args.level)
        _write_output(io.dumps_pointcloud(cloud), args.out)
        print(f"{cloud.n} points, dim {cloud.dim}", file=sys.stderr)
    elif args.kind == "cantor":
        if args.level is None:
            raise UsageError("cantor requires --level")
        cloud = spaces.cantor_set(args.level)
        _write_output(io.dumps_pointcloud(cloud), args.out)
        print(f"{cloud.n} points, dim {cloud.dim}", file=sys.stderr)
    elif args.kind == "sierpinski-tree":
        if args.levels is None:
            raise UsageError("sierpinski-tree requires --levels")
        params = spaces.SierpinskiTreeParams(s=args.s, f=args.f, levels=args.levels)
        net = spaces.sierpinski_tree(params)
        _write_output(io.dumps_network(net), args.out)
        print(f"{net.node_count} nodes, {net.edge_count} edges", file=sys.stderr)
    else:
        if args.n is None:
            raise UsageError("line requires --n")
        net = spaces.line_network(args.n)
        _write_output(io.dumps_network(net), args.out)
        if net.node_count == 1:
            print("warning: single node, empty edge list", file=sys.stderr)
        print(f"{net.node_count} nodes, {net.edge_count} edges", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# estimate


def _sniff_kind(path):
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if "," in line:
                return "cloud"
            return "network" if len(line.split()) == 3 else "cloud"
    return "cloud"


_COMPAT = {
    "box": ("cloud", "network"),
    "correlation": ("cloud",),
    "ph-dim": ("cloud",),
    "magnitude-dim": ("cloud", "network"),
    "alpha-magnitude-dim": ("cloud",),
    "internal-scaling": ("network",),
    "network-ph-dim": ("network",),
}


def _eps_grid_from_args(args, decreasing):
    if args.eps_min is None or args.eps_max is None:
        return None
    grid = np.geomspace(args.eps_min, args.eps_max, args.eps_count)
    grid = grid[::-1] if decreasing else grid
    return [float(g) for g in grid]


def _window_from_args(args):
    if args.fit_lo is None and args.fit_hi is None:
        return None
    if args.fit_lo is None or args.fit_hi is None:
        raise UsageError("--fit-lo and --fit-hi must be given together")
    return (args.fit_lo, args.fit_hi)


def _t_grid_from_args(args):
    count = int(round((args.t_max - args.t_min) / args.t_step)) + 1
    return [args.t_min + k * args.t_step for k in range(count)]


def _ph_config_from_args(args):
    schedule = tuple(range(args.n_min, args.n_max + 1, args.n_step))
    return estimators.PHDimensionConfig(
        degree=args.degree,
        alpha=args.alpha,
        n_schedule=schedule,
        repeats=args.repeats,
        seed=args.seed,
        fit_tail=min(args.fit_tail, len(schedule)),
    )


def _cmd_estimate(args):
    kind = args.kind or _sniff_kind(args.input)
    allowed = _COMPAT[args.estimator]
    if kind not in allowed:
        raise UsageError(
            f"estimator {args.estimator!r} does not accept {kind} input; "
            f"valid pairs: "
            + ", ".join(f"{e}<-{'|'.join(k)}" for e, k in sorted(_COMPAT.items()))
        )

    cloud = net = None
    if kind == "cloud":
        cloud = io.load_pointcloud(args.input)
    else:
        net = io.load_network(args.input)

    window = _window_from_args(args)
    if args.estimator == "box":
        if kind == "cloud":
            result = estimators.box_counting_pointcloud(
                cloud, _eps_grid_from_args(args, decreasing=True), window
            )
        else:
            result = estimators.box_counting_network(
                net, _eps_grid_from_args(args, decreasing=True), window
            )
    elif args.estimator == "correlation":
        result = estimators.correlation_dimension(
            cloud, _eps_grid_from_args(args, decreasing=False), window
        )
    elif args.estimator == "ph-dim":
        result = estimators.ph_dimension(cloud, _ph_config_from_args(args), args.threads)
    elif args.estimator == "magnitude-dim":
        metric = (
            spaces.euclidean_metric(cloud) if cloud is not None
            else spaces.shortest_path_metric(net)
        )
        t_grid = _t_grid_from_args(args)
        if window is None and len(t_grid) >= 80:
            window = (40, 80)
        result = estimators.magnitude_dimension(metric, t_grid, window, args.threads)
    elif args.estimator == "alpha-magnitude-dim":
        t_grid = _t_grid_from_args(args)
        if window is None and len(t_grid) >= 80:
            window = (40, 80)
        result = estimators.alpha_magnitude_dimension(
            cloud, t_grid, window, args.max_degree
        )
    elif args.estimator == "internal-scaling":
        node = None if args.node == "all" else int(args.node)
        result = estimators.internal_scaling_dimension(
            net, node, _eps_grid_from_args(args, decreasing=False), window
        )
    else:
        result = estimators.network_ph_dimension(
            net, _ph_config_from_args(args), args.max_dim, args.threads
        )

    record = result.to_json_dict()
    record["params"]["input"] = args.input
    record["params"].setdefault("seed", args.seed)
    record["seed"] = record["params"]["seed"]
    if args.format == "json":
        _write_output(json.dumps(record, indent=2) + "\n", args.out)
    else:
        lo, hi = record["window"]
        rows = [
            "estimator,value,slope,intercept,r2,window_lo,window_hi,seed",
            f"{record['estimator']},{record['value']:.17g},{record['slope']:.17g},"
            f"{record['intercept']:.17g},{record['r2']:.17g},{lo},{hi},{record['seed']}",
        ]
        _write_output("\n".join(rows) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench

LOG3_OVER_LOG2 = math.log(3.0) / math.log(2.0)
LOG2_OVER_LOG3 = math.log(2.0) / math.log(3.0)


def _uniform_square(n, seed):
    rng = np.random.default_rng(seed)
    return spaces.PointCloud(rng.random((n, 2)))


def _uniform_interval(n, seed):
    rng = np.random.default_rng(seed)
    return spaces.PointCloud(rng.random((n, 1)))


def _classic_cells(seed):
    """Suite definition: (space name, estimator tag, reference, runner)."""
    sierp = spaces.sierpinski_triangle(7)
    cantor = spaces.cantor_set(10)
    square = _uniform_square(4096, spaces.derive_seed(seed, 101))
    interval = _uniform_interval(2048, spaces.derive_seed(seed, 102))
    tree = spaces.sierpinski_tree(spaces.SierpinskiTreeParams(s=3, f=0.5, levels=6))
    line = spaces.line_network(2001)

    clouds = [
        ("sierpinski-7", sierp, LOG3_OVER_LOG2),
        ("cantor-10", cantor, LOG2_OVER_LOG3),
        ("uniform-square", square, 2.0),
        ("uniform-interval", interval, 1.0),
    ]
    nets = [
        ("sierpinski-tree-6", tree, LOG3_OVER_LOG2),
        ("line-2001", line, 1.0),
    ]

    def ph_cfg():
        return estimators.PHDimensionConfig(seed=seed)

    cells = []
    for name, cloud, ref in clouds:
        cells.append((name, "box", ref, lambda c=cloud: estimators.box_counting_pointcloud(c)))
        cells.append(
            (name, "correlation", ref, lambda c=cloud: estimators.correlation_dimension(c))
        )
        cells.append(
            (name, "ph-dim", ref, lambda c=cloud: estimators.ph_dimension(c, ph_cfg()))
        )

        def run_mag(c=cloud):
            sub = (
                spaces.subsample(c, 1000, spaces.derive_seed(seed, 103))
                if c.n > 1000
                else c
            )
            return estimators.magnitude_dimension(
                spaces.euclidean_metric(sub),
                [float(t) for t in range(1, 101)],
                (40, 80),
            )

        cells.append((name, "magnitude-dim", ref, run_mag))
        cells.append(
            (
                name,
                "alpha-magnitude-dim",
                ref,
                lambda c=cloud: estimators.alpha_magnitude_dimension(c),
            )
        )
    for name, net, ref in nets:
        cells.append(
            (name, "network-box", ref, lambda n=net: estimators.box_counting_network(n))
        )
        cells.append(
            (
                name,
                "internal-scaling",
                ref,
                lambda n=net: estimators.internal_scaling_dimension(n),
            )
        )
        cells.append(
            (
                name,
                "network-ph-dim",
                None,
                lambda n=net: estimators.network_ph_dimension(n, ph_cfg()),
            )
        )
    return cells


def run_bench(suite="classic", seed=42, threads=None):
    """Run a benchmark suite; per-cell failures are recorded, not raised."""
    if suite != "classic":
        raise UsageError(f"unknown suite {suite!r}")
    cells = _classic_cells(seed)

    def run_cell(cell):
        space, tag, ref, runner = cell
        start = time.perf_counter()
        record = {
            "space": space,
            "estimator": tag,
            "status": "ok",
            "value": None,
            "reference": ref,
            "deviation": None,
            "seed": seed,
            "warnings": [],
            "error": None,
        }
        try:
            est = runner()
            record["value"] = est.value
            record["warnings"] = list(est.warnings)
            if ref is not None:
                record["deviation"] = est.value - ref
        except FracdimError as exc:
            record["status"] = "error"
            record["error"] = f"{type(exc).__name__}: {exc}"
        except ValueError as exc:
            record["status"] = "error"
            record["error"] = f"ValueError: {exc}"
        record["wall_time_s"] = time.perf_counter() - start
        return record

    from .parallel import parallel_map

    return parallel_map(run_cell, cells, threads)


def _format_bench_text(records):
    header = f"{'space':20s} {'estimator':20s} {'value':>10s} {'reference':>10s} {'deviation':>10s} {'time_s':>8s}  status"
    lines = [header, "-" * len(header)]
    for r in records:
        value = f"{r['value']:.4f}" if r["value"] is not None else "-"
        ref = f"{r['reference']:.4f}" if r["reference"] is not None else "-"
        dev = f"{r['deviation']:+.4f}" if r["deviation"] is not None else "-"
        status = r["status"] if r["status"] == "ok" else f"error: {r['error']}"
        lines.append(
            f"{r['space']:20s} {r['estimator']:20s} {value:>10s} {ref:>10s} {dev:>10s} "
            f"{r['wall_time_s']:8.2f}  {status}"
        )
    return "\n".join(lines) + "\n"


def _cmd_bench(args):
    records = run_bench(args.suite, args.seed, args.threads)
    if args.format == "json":
        _write_output(json.dumps(records, indent=2) + "\n", args.out)
    elif args.format == "csv":
        rows = ["space,estimator,status,value,reference,deviation,wall_time_s"]
        for r in records:
            rows.append(
                f"{r['space']},{r['estimator']},{r['status']},"
                f"{'' if r['value'] is None else repr(r['value'])},"
                f"{'' if r['reference'] is None else repr(r['reference'])},"
                f"{'' if r['deviation'] is None else repr(r['deviation'])},"
                f"{r['wall_time_s']!r}"
            )
        _write_output("\n".join(rows) + "\n", args.out)
    else:
        sys.stdout.write(_format_bench_text(records))
        if args.out:
            with open(args.out, "w", encoding="ascii") as fh:
                json.dump(records, fh, indent=2)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        return _cmd_bench(args)
    except (UsageError, ParseError, DegenerateInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndefinedDimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED_DIMENSION
    except SingularSimilarityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR_SIMILARITY
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE_LIMIT


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
