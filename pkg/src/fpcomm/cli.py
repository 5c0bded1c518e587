"""Command line interface: ``run``, ``gen``, ``score``, ``bench`` and ``oracle``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import _kernels, datasets, fastfp, fpgreed
from .graph import EdgeListError, bridged_cliques, load_edge_list, ring_of_cliques, write_edge_list
from .oracle import OracleTooLarge, exhaustive_best_fp
from .quality import PartitionError, read_partition, write_partition
from .report import make_report, scores

EXIT_USAGE = 1
EXIT_DATA = 2
ALGORITHMS = ("fpgreed", "fastfp")
CSV_FIELDS = ["dataset", "nodes", "edges", "algorithm", "fp", "fp_fraction", "modularity", "modules", "time_ms", "status", "error"]


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str, largest_component: bool = False):
    try:
        if path == "-":
            return load_edge_list(sys.stdin.buffer, largest_component)
        if path.startswith("bundled:"):
            return datasets.load(path.split(":", 1)[1])
        return load_edge_list(path, largest_component)
    except (OSError, EdgeListError, KeyError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _dataset_name(path: str) -> str:
    if path == "-":
        return "stdin"
    if path.startswith("bundled:"):
        return path.split(":", 1)[1]
    name = Path(path).name
    for suffix in (".gz", ".txt", ".edges", ".edgelist"):
        name = name.removesuffix(suffix)
    return name


def run_algorithm(g, algorithm: str, threshold=fastfp.DEFAULT_THRESHOLD, edge_mode=fastfp.DEFAULT_EDGE_MODE,
                  order="ascending", seed=None):
    """Run one algorithm; returns ``(partition, parameters, wall_time_ms)``.

    Timing covers the algorithm call only: no parsing, no kernel compilation.
    """
    _kernels.warmup()
    start = time.perf_counter()
    if algorithm == "fpgreed":
        p, _ = fpgreed.run(g, order=order, seed=seed)
        params = {"order": order, "seed": seed}
    elif algorithm == "fastfp":
        p, _ = fastfp.run(g, threshold=threshold, edge_mode=edge_mode)
        params = {"threshold": threshold, "edge_mode": edge_mode}
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return p, params, (time.perf_counter() - start) * 1e3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _report_row(r: dict, status="ok", error="") -> dict:
    return {
        "dataset": r["dataset"], "nodes": r["n"], "edges": r["m"], "algorithm": r["algorithm"],
        "fp": r["fp"], "fp_fraction": r["fp_fraction"], "modularity": r["modularity"],
        "modules": r["modules"], "time_ms": r["wall_time_ms"], "status": status, "error": error,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    g, labels = _read_graph(args.input, args.largest_component)
    algos = ALGORITHMS if args.algorithm == "both" else (args.algorithm,)
    name = _dataset_name(args.input)
    reports = []
    for algo in algos:
        p, params, ms = run_algorithm(g, algo, args.threshold, args.edge_mode, args.order, args.seed)
        reports.append(make_report(name, algo, params, g, p, ms).to_dict())
        if args.partition_out != "none":
            target = Path(args.partition_out.format(stem=name, algorithm=algo))
            with target.open("w") as fh:
                write_partition(p, fh, labels)
    payload = reports[0] if len(reports) == 1 else reports
    if args.format == "csv":
        text = _rows_to_csv([_report_row(r) for r in reports])
    else:
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def cmd_gen(args) -> int:
    try:
        if args.topology == "ring":
            g = ring_of_cliques(args.a, args.b)
        else:
            g = bridged_cliques(args.a, args.b)
    except ValueError as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_USAGE
    buf = io.StringIO()
    write_edge_list(g, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_score(args) -> int:
    g, labels = _read_graph(args.input)
    try:
        with open(args.partition) as fh:
            p = read_partition(g, fh, labels)
    except OSError as exc:
        raise DataError(str(exc)) from None
    except PartitionError as exc:
        raise DataError(f"{args.partition}: {exc}") from None
    _emit(json.dumps(scores(g, p), indent=2) + "\n", args.out)
    return 0


def _bench_row(task: dict) -> list[dict]:
    rows = []
    try:
        if task.get("bundled"):
            g, _ = datasets.load(task["bundled"])
        else:
            g, _ = load_edge_list(task["path"])
    except (OSError, EdgeListError, KeyError) as exc:
        return [{"dataset": task["name"], "algorithm": a, "status": "failed", "error": str(exc)} for a in task["algorithms"]]
    for algo in task["algorithms"]:
        try:
            times, p, params = [], None, None
            for _ in range(task["repetitions"]):
                p, params, ms = run_algorithm(g, algo, task["threshold"], task["edge_mode"], task["order"], task["seed"])
                times.append(ms)
            rep = make_report(task["name"], algo, params, g, p, statistics.median(times)).to_dict()
            rows.append(_report_row(rep))
        except Exception as exc:  # a failing row must not stop the bench
            rows.append({"dataset": task["name"], "nodes": g.n, "edges": g.m, "algorithm": algo,
                         "status": "failed", "error": f"{type(exc).__name__}: {exc}"})
    return rows


def load_manifest(path: str) -> list[dict]:
    """Expand a bench manifest into one task per dataset.

    Manifest keys: ``datasets`` (list of ``{"name", "path"}`` or
    ``{"name", "bundled"}``, optionally with per-dataset ``algorithms``),
    ``algorithms``, ``repetitions``, ``threshold``, ``edge_mode``, ``order``,
    ``seed``. Relative paths resolve against the manifest's directory.
    """
    try:
        manifest = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None
    base = Path(path).parent
    defaults = {
        "algorithms": list(manifest.get("algorithms", ALGORITHMS)),
        "repetitions": int(manifest.get("repetitions", 1)),
        "threshold": int(manifest.get("threshold", fastfp.DEFAULT_THRESHOLD)),
        "edge_mode": manifest.get("edge_mode", fastfp.DEFAULT_EDGE_MODE),
        "order": manifest.get("order", "ascending"),
        "seed": manifest.get("seed"),
    }
    tasks = []
    for entry in manifest.get("datasets", []):
        task = {**defaults, **{k: v for k, v in entry.items() if k in defaults}}
        task["name"] = entry.get("name") or _dataset_name(entry.get("path", entry.get("bundled", "?")))
        if "bundled" in entry:
            task["bundled"] = entry["bundled"]
        else:
            task["path"] = str(base / entry["path"])
        if task["repetitions"] < 1:
            raise DataError(f"{path}: repetitions must be >= 1")
        tasks.append(task)
    return tasks


def cmd_bench(args) -> int:
    tasks = load_manifest(args.manifest)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_row, tasks))
    else:
        results = [_bench_row(t) for t in tasks]
    rows = [row for chunk in results for row in chunk]
    for row in rows:
        for key in CSV_FIELDS:
            row.setdefault(key, None if key != "error" else "")
    if args.format == "csv":
        text = _rows_to_csv(rows)
    else:
        text = json.dumps(rows, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def cmd_oracle(args) -> int:
    g, labels = _read_graph(args.input)
    try:
        res = exhaustive_best_fp(g, args.max_n)
    except OracleTooLarge as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ext = labels.tolist()
    payload = {
        "n": g.n,
        "m": g.m,
        "best_fp": round(res.best_fp.value, 6),
        "best_fp_fraction": str(res.best_fp),
        "partitions_scored": res.n_partitions,
        "optimal_partitions": res.n_optimal,
        "best_partitions": [[[ext[u] for u in c] for c in part] for part in res.best_partitions[: args.limit]],
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpcomm", description="Community detection by maximizing the performance (fp) measure.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="detect communities in an edge list")
    run.add_argument("input", help="edge list path, '-' for stdin, or bundled:<name>")
    run.add_argument("--algorithm", choices=(*ALGORITHMS, "both"), default="fpgreed")
    run.add_argument("--threshold", type=int, default=fastfp.DEFAULT_THRESHOLD, help="fastfp weight threshold t")
    run.add_argument("--edge-mode", choices=sorted(fastfp.EDGE_MODES), default=fastfp.DEFAULT_EDGE_MODE,
                     help="fastfp: count edges among common neighbours once (unordered) or twice (ordered)")
    run.add_argument("--order", choices=("ascending", "random"), default="ascending", help="fpgreed sweep order")
    run.add_argument("--seed", type=int, default=None, help="seed for --order random")
    run.add_argument("--largest-component", action="store_true", help="keep only the largest connected component")
    run.add_argument("--partition-out", default="{stem}.{algorithm}.partition",
                     help="partition file path; {stem} and {algorithm} are substituted; 'none' to skip")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="print a resolution-limit benchmark graph as an edge list")
    gen.add_argument("topology", choices=("ring", "bridged"))
    gen.add_argument("a", type=int, help="ring: number of cliques; bridged: big clique size")
    gen.add_argument("b", type=int, help="ring: clique size; bridged: small clique size")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    score = sub.add_parser("score", help="score a partition file against an edge list")
    score.add_argument("input")
    score.add_argument("partition")
    score.add_argument("--out")
    score.set_defaults(func=cmd_score)

    bench = sub.add_parser("bench", help="run a benchmark manifest")
    bench.add_argument("manifest")
    bench.add_argument("--format", choices=("json", "csv"), default="json")
    bench.add_argument("--out")
    bench.add_argument("--jobs", type=int, default=1)
    bench.set_defaults(func=cmd_bench)

    oracle = sub.add_parser("oracle", help="exact fp maximum of a tiny graph by enumeration")
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--max-n", type=int, default=12)
    oracle.add_argument("--limit", type=int, default=20, help="maximum number of optimal partitions to print")
    oracle.add_argument("--out")
    oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and args.seed < 0:
        print("fpcomm: error: --seed must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "threshold", 1) < 1:
        print("fpcomm: error: --threshold must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DataError as exc:
        print(f"fpcomm: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
