"""Time the compiled kernels against their pure-Python bodies.

    python benchmarks/bench_kernels.py [--n 2000] [--groups 40] [--repeat 3] [--input edges.txt]

Every kernel is run on identical inputs in both modes and the outputs are
compared before any timing is reported. The numpy route for the candidate
graph is timed too, since it is what runs when numba is switched off.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from fpcomm import _accel, _kernels, fastfp
from fpcomm.graph import Graph, load_edge_list
from fpcomm.quality import Partition


def planted(n, groups, p_in, p_out, seed):
    rng = np.random.default_rng(seed)
    block = rng.integers(0, groups, size=n)
    iu, ju = np.triu_indices(n, 1)
    same = block[iu] == block[ju]
    keep = rng.random(iu.shape[0]) < np.where(same, p_in, p_out)
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


def timed(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def greedy_case(g):
    p = Partition.singletons(g)
    order = np.arange(g.n, dtype=np.int64)
    scratch = lambda: (np.zeros(g.n, np.int64), np.zeros(g.n, np.int64), np.zeros(g.n, np.int64))

    def call(kernel):
        a, s, i = p.assignment.copy(), p.size.copy(), p.intra.copy()
        count, touched, deltas = scratch()
        moves = kernel(g.indptr, g.indices, order, a, s, i, count, touched, deltas)
        return moves, a
    return call


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--groups", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--input", help="edge list to use instead of a planted-partition graph")
    args = ap.parse_args(argv)

    if not _accel.USE_NUMBA:
        print("numba is disabled or missing; nothing to compare", file=sys.stderr)
        return 1
    if args.input:
        g, _ = load_edge_list(args.input)
    else:
        g = planted(args.n, args.groups, 0.3, 0.002, seed=1)
    print(f"graph: n={g.n} m={g.m}")
    _kernels.warmup()

    tri = _kernels.edge_triangles(g.indptr, g.indices)
    node = greedy_case(g)
    cases = {
        "node_pass": (lambda: node(_kernels.node_pass), lambda: node(_kernels.node_pass.py_func)),
        "edge_triangles": (lambda: _kernels.edge_triangles(g.indptr, g.indices),
                           lambda: _kernels.edge_triangles.py_func(g.indptr, g.indices)),
        "candidate_edges": (lambda: _kernels.candidate_edges(g.indptr, g.indices, *tri, 3, 1),
                            lambda: _kernels.candidate_edges.py_func(g.indptr, g.indices, *tri, 3, 1)),
    }

    print(f"{'kernel':18} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    for name, (fast, slow) in cases.items():
        tf, a = timed(fast, args.repeat)
        ts, b = timed(slow, 1)
        if not same(a, b):
            print(f"{name}: outputs differ", file=sys.stderr)
            return 2
        print(f"{name:18} {tf:10.4f} {ts:10.4f} {ts / tf:8.1f}x")

    tf, a = timed(lambda: fastfp.candidate_graph_numba(g), args.repeat)
    tn, b = timed(lambda: fastfp.candidate_graph_numpy(g), args.repeat)
    if a.as_dict() != b.as_dict():
        print("candidate graph: numpy route differs", file=sys.stderr)
        return 2
    print(f"{'candidate (numpy)':18} {tf:10.4f} {tn:10.4f} {tn / tf:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
