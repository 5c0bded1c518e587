"""Exhaustive fp maximization over every set partition of a small graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph
from .quality import FpScore, pair_count

DEFAULT_MAX_N = 12
MAX_KEPT = 4096


class OracleTooLarge(ValueError):
    pass


@dataclass
class OracleResult:
    best_fp: FpScore
    best_partitions: list[list[list[int]]]
    n_partitions: int
    n_optimal: int  # may exceed len(best_partitions) when truncated at MAX_KEPT


def _rgs_to_communities(rgs: np.ndarray) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    for u, b in enumerate(rgs.tolist()):
        blocks.setdefault(b, []).append(u)
    # block numbers of a restricted growth string already follow smallest member
    return [blocks[b] for b in sorted(blocks)]


def exhaustive_best_fp(g: Graph, max_n: int = DEFAULT_MAX_N) -> OracleResult:
    """Score all Bell(n) partitions; refuse graphs with more than ``max_n`` nodes."""
    if g.n > max_n:
        raise OracleTooLarge(f"oracle refuses n={g.n} > max_n={max_n}")
    if g.n < 2:
        raise ValueError("fp is undefined for fewer than two nodes")
    adj = np.zeros((g.n, g.n), dtype=np.int64)
    e = g.edges()
    adj[e[:, 0], e[:, 1]] = 1
    adj[e[:, 1], e[:, 0]] = 1
    best, count, kept, nkept = _kernels.best_partitions(g.n, adj, MAX_KEPT)
    parts = [_rgs_to_communities(kept[i]) for i in range(min(nkept, MAX_KEPT))]
    return OracleResult(FpScore(int(best), pair_count(g.n)), parts, int(count), int(nkept))
