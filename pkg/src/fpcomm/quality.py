"""Partition bookkeeping, performance (fp) and modularity scoring, exact deltas.

fp is tracked as an integer count of correctly interpreted node pairs over
``n(n-1)/2``; every greedy decision compares integers, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable

import numpy as np

from .graph import Graph


class PartitionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FpScore:
    correct: int
    total: int

    def __post_init__(self):
        if not 0 <= self.correct <= self.total:
            raise ValueError(f"invalid fp score {self.correct}/{self.total}")

    @property
    def value(self) -> float:
        return self.correct / self.total

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.correct, self.total)

    def __float__(self):
        return self.value

    def __str__(self):
        return f"{self.correct}/{self.total}"


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


class Partition:
    """Node -> community assignment with per-community size and intra-edge caches.

    Community ids live in ``[0, n)``; ``size[c] == 0`` marks an id that is not in
    use. ``members`` maps each live id to its node set.
    """

    def __init__(self, graph: Graph, assignment, size, intra, members):
        self.graph = graph
        self.assignment = assignment
        self.size = size
        self.intra = intra
        self.members = members

    # -- construction -----------------------------------------------------
    @classmethod
    def singletons(cls, g: Graph) -> "Partition":
        n = g.n
        return cls(
            g,
            np.arange(n, dtype=np.int64),
            np.ones(n, dtype=np.int64),
            np.zeros(n, dtype=np.int64),
            {u: {u} for u in range(n)},
        )

    @classmethod
    def from_labels(cls, g: Graph, labels) -> "Partition":
        """Any per-node labelling; ids are renumbered by smallest member."""
        labels = np.asarray(labels)
        if labels.shape != (g.n,):
            raise PartitionError(f"expected {g.n} labels, got shape {labels.shape}")
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(first.shape[0], dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
        return cls.from_assignment(g, rank[inverse.ravel()])

    @classmethod
    def from_communities(cls, g: Graph, communities: Iterable[Iterable[int]]) -> "Partition":
        labels = np.full(g.n, -1, dtype=np.int64)
        for c, nodes in enumerate(communities):
            for u in nodes:
                if labels[u] != -1:
                    raise PartitionError(f"node {u} appears in more than one community")
                labels[u] = c
        missing = np.flatnonzero(labels < 0)
        if missing.size:
            raise PartitionError(f"nodes without a community: {missing.tolist()}")
        return cls.from_labels(g, labels)

    @classmethod
    def from_assignment(cls, g: Graph, assignment) -> "Partition":
        """Trusting constructor: ``assignment`` already holds ids in ``[0, n)``."""
        a = np.array(assignment, dtype=np.int64)
        n = g.n
        if a.shape != (n,) or (n and (a.min() < 0 or a.max() >= n)):
            raise PartitionError("assignment ids must be in [0, n)")
        size = np.bincount(a, minlength=n).astype(np.int64)
        intra = _intra_counts(g, a)
        members: dict[int, set[int]] = {}
        for u, c in enumerate(a.tolist()):
            members.setdefault(c, set()).add(u)
        return cls(g, a, size, intra, members)

    def copy(self) -> "Partition":
        return Partition(
            self.graph,
            self.assignment.copy(),
            self.size.copy(),
            self.intra.copy(),
            {c: set(s) for c, s in self.members.items()},
        )

    # -- views ------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.graph.n

    def __len__(self):
        return len(self.members)

    def community_of(self, u: int) -> int:
        return int(self.assignment[u])

    def communities(self) -> list[list[int]]:
        """Sorted member lists, ordered by smallest member."""
        return sorted(sorted(s) for s in self.members.values())

    def labels(self) -> np.ndarray:
        """Canonical labels ``0..k-1`` numbered by smallest member."""
        out = np.empty(self.n, dtype=np.int64)
        for c, nodes in enumerate(self.communities()):
            out[nodes] = c
        return out

    def sizes(self) -> list[int]:
        return sorted((len(s) for s in self.members.values()), reverse=True)

    def check(self) -> None:
        """Recount every cache from scratch and compare (test helper)."""
        fresh = Partition.from_assignment(self.graph, self.assignment)
        assert np.array_equal(fresh.size, self.size), "size cache drifted"
        assert np.array_equal(fresh.intra, self.intra), "intra cache drifted"
        assert fresh.members == self.members, "member sets drifted"

    def __repr__(self):
        return f"Partition(n={self.n}, communities={len(self)})"


def _intra_counts(g: Graph, a: np.ndarray) -> np.ndarray:
    e = g.edges()
    ca, cb = a[e[:, 0]], a[e[:, 1]]
    same = ca == cb
    return np.bincount(ca[same], minlength=g.n).astype(np.int64)


def _same_graph(g: Graph, p: Partition) -> None:
    if p.graph is not g and p.n != g.n:
        raise PartitionError("partition does not belong to this graph")


# ---------------------------------------------------------------------------
# scores


def fp_correct(n: int, m: int, size: np.ndarray, intra_total: int) -> int:
    """Closed form for the number of correctly interpreted pairs.

    Intra edges plus inter-community non-edges; the latter is every
    inter-community pair minus the inter-community edges.
    """
    intra_pairs = int((size * (size - 1) // 2).sum())
    return intra_total + (pair_count(n) - intra_pairs - (m - intra_total))


def fp(g: Graph, p: Partition) -> FpScore:
    _same_graph(g, p)
    if g.n < 2:
        raise ValueError("fp is undefined for fewer than two nodes")
    return FpScore(fp_correct(g.n, g.m, p.size, int(p.intra.sum())), pair_count(g.n))


def modularity(g: Graph, p: Partition, gamma: float = 1.0) -> float:
    _same_graph(g, p)
    if g.m == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    two_m = 2.0 * g.m
    deg_sum = np.bincount(p.assignment, weights=g.degrees, minlength=g.n)
    live = p.size > 0
    return float(np.sum(p.intra[live] / g.m - gamma * (deg_sum[live] / two_m) ** 2))


# ---------------------------------------------------------------------------
# deltas and updates


def _neighbor_count_in(g: Graph, p: Partition, u: int, c: int) -> int:
    return int(np.count_nonzero(p.assignment[g.neighbors(u)] == c))


def move_delta(g: Graph, p: Partition, u: int, target: int) -> int:
    """Change in the correct-pair count when ``u`` moves to community ``target``.

    Only pairs containing ``u`` change: leaving A gains the ``|A|-1-d_A``
    non-neighbours and loses ``d_A`` neighbours, joining B gains ``d_B`` and
    loses ``|B|-d_B``.
    """
    _same_graph(g, p)
    a = int(p.assignment[u])
    if target == a:
        raise ValueError(f"node {u} is already in community {target}")
    d_a = _neighbor_count_in(g, p, u, a)
    d_b = _neighbor_count_in(g, p, u, target)
    return (int(p.size[a]) - 1 - 2 * d_a) + (2 * d_b - int(p.size[target]))


def merge_delta(p: Partition, c1: int, c2: int, e_cc: int) -> int:
    """Change in the correct-pair count when merging ``c1`` and ``c2``.

    Positive exactly when ``e_cc > size1 * size2 / 2``.
    """
    if c1 == c2:
        raise ValueError("cannot merge a community with itself")
    return 2 * e_cc - int(p.size[c1]) * int(p.size[c2])


def merge_delta_sizes(s1: int, s2: int, e_cc: int) -> int:
    return 2 * e_cc - s1 * s2


def cross_edges(g: Graph, p: Partition, c1: int, c2: int) -> int:
    """Edges between ``c1`` and ``c2``, scanning the smaller community."""
    _same_graph(g, p)
    if c1 == c2:
        raise ValueError("cross_edges needs two distinct communities")
    if p.size[c1] > p.size[c2]:
        c1, c2 = c2, c1
    a = p.assignment
    return sum(int(np.count_nonzero(a[g.neighbors(u)] == c2)) for u in p.members[c1])


def apply_move(g: Graph, p: Partition, u: int, target: int) -> Partition:
    """Move ``u`` into ``target`` in place (O(deg u)); returns ``p``."""
    _same_graph(g, p)
    a = int(p.assignment[u])
    if target == a:
        raise ValueError(f"node {u} is already in community {target}")
    if p.size[target] == 0:
        raise ValueError(f"community {target} does not exist")
    nbr = p.assignment[g.neighbors(u)]
    p.intra[a] -= int(np.count_nonzero(nbr == a))
    p.intra[target] += int(np.count_nonzero(nbr == target))
    p.size[a] -= 1
    p.size[target] += 1
    p.assignment[u] = target
    p.members[a].discard(u)
    p.members[target].add(u)
    if p.size[a] == 0:
        del p.members[a]
    return p


def apply_merge(g: Graph, p: Partition, c1: int, c2: int) -> Partition:
    """Merge two communities in place; the smaller id survives."""
    _same_graph(g, p)
    if c1 == c2:
        raise ValueError("cannot merge a community with itself")
    keep, gone = min(c1, c2), max(c1, c2)
    e_cc = cross_edges(g, p, keep, gone)
    moved = p.members.pop(gone)
    p.assignment[list(moved)] = keep
    p.members[keep] |= moved
    p.size[keep] += p.size[gone]
    p.intra[keep] += p.intra[gone] + e_cc
    p.size[gone] = 0
    p.intra[gone] = 0
    return p


# ---------------------------------------------------------------------------
# partition files


def write_partition(p: Partition, stream: IO[str], labels=None) -> None:
    """One ``external_id community_id`` line per node, in node order."""
    canon = p.labels()
    for u in range(p.n):
        ext = labels[u] if labels is not None else u
        stream.write(f"{ext} {canon[u]}\n")


def read_partition(g: Graph, stream: IO[str], labels=None) -> Partition:
    """Inverse of :func:`write_partition`; every node must appear exactly once."""
    index = {int(lab): i for i, lab in enumerate(labels)} if labels is not None else None
    comm = np.full(g.n, -1, dtype=np.int64)
    unknown, duplicated = [], []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line[0] in "#%":
            continue
        parts = line.split()
        if len(parts) < 2:
            raise PartitionError(f"line {lineno}: expected 'node community'")
        try:
            ext, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise PartitionError(f"line {lineno}: non-integer field in {line!r}") from None
        u = index.get(ext, -1) if index is not None else (ext if 0 <= ext < g.n else -1)
        if u < 0:
            unknown.append(ext)
        elif comm[u] != -1:
            duplicated.append(ext)
        else:
            comm[u] = c
    missing = np.flatnonzero(comm == -1)
    problems = []
    if unknown:
        problems.append(f"unknown nodes: {unknown}")
    if duplicated:
        problems.append(f"duplicated nodes: {duplicated}")
    if missing.size:
        ext_missing = labels[missing] if labels is not None else missing
        problems.append(f"missing nodes: {np.asarray(ext_missing).tolist()}")
    if problems:
        raise PartitionError("; ".join(problems))
    return Partition.from_labels(g, comm)
