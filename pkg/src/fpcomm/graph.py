"""Undirected simple graphs, edge-list ingestion and the resolution-limit generators."""

from __future__ import annotations

import gzip
import io
import os
from functools import cached_property
from typing import IO, Iterable

import numpy as np

COMMENT_PREFIXES = ("#", "%")


class EdgeListError(ValueError):
    """Raised for unreadable or malformed edge-list input."""


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Stored as CSR arrays (``indptr``, ``indices``) with each neighbor row
    sorted ascending; these are what the compiled kernels consume. Set-based
    adjacency is built on first use.
    """

    __slots__ = ("n", "m", "indptr", "indices", "__dict__")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.m = int(indices.shape[0] // 2)
        indptr.setflags(write=False)
        indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build from an iterable/array of ``(u, v)`` pairs.

        Direction is ignored; self-loops and duplicates are dropped.
        """
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint out of range for n={n}")
        arr = arr[arr[:, 0] != arr[:, 1]]
        src = np.concatenate([arr[:, 0], arr[:, 1]])
        dst = np.concatenate([arr[:, 1], arr[:, 0]])
        codes = np.unique(src * n + dst)
        src, dst = np.divmod(codes, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst.astype(np.int64))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    @cached_property
    def adj(self) -> list[frozenset]:
        return [frozenset(self.neighbors(u).tolist()) for u in range(self.n)]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.shape[0] and row[i] == v)

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])


# ---------------------------------------------------------------------------
# ingestion


def _open_source(source) -> IO[bytes]:
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            return gzip.open(path, "rb")
        return open(path, "rb")
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source)
    return source


def parse_edge_lines(lines: Iterable[bytes]) -> np.ndarray:
    """Parse edge-list lines into an ``(k, 2)`` int64 array of raw labels."""
    flat: list[int] = []
    append = flat.append
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[:1] in (b"#", b"%"):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise EdgeListError(f"line {lineno}: expected two node ids, got {line[:60]!r}")
        try:
            append(int(tokens[0]))
            append(int(tokens[1]))
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer node id in {line[:60]!r}") from None
    return np.array(flat, dtype=np.int64).reshape(-1, 2)


def load_edge_list(source, keep_largest_component: bool = False) -> tuple[Graph, np.ndarray]:
    """Read a whitespace-separated edge list.

    ``source`` may be a path (``.gz`` is decompressed), raw bytes or a binary
    stream. Returns the graph and ``labels`` where ``labels[i]`` is the
    original id of node ``i``. Labels are assigned in ascending order of the
    original ids, so the result does not depend on line order or edge
    direction.
    """
    stream = _open_source(source)
    try:
        raw = parse_edge_lines(stream)
    except UnicodeDecodeError as exc:  # pragma: no cover - bytes are never decoded
        raise EdgeListError(str(exc)) from None
    finally:
        if stream is not source:
            stream.close()
    if raw.shape[0] == 0:
        raise EdgeListError("edge list contains no edges")

    labels, inverse = np.unique(raw.ravel(), return_inverse=True)
    g = Graph.from_edges(labels.shape[0], inverse.reshape(-1, 2))
    if keep_largest_component:
        g, kept = largest_component(g)
        labels = labels[kept]
    return g, labels


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest connected component (ties: lowest node id)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    mat = csr_matrix((np.ones(g.indices.shape[0], dtype=np.int8), g.indices, g.indptr), shape=(g.n, g.n))
    _, comp = connected_components(mat, directed=False)
    counts = np.bincount(comp)
    # argmax picks the first maximal label; labels follow first appearance by node id
    kept = np.flatnonzero(comp == np.argmax(counts))
    return induced_subgraph(g, kept), kept


def induced_subgraph(g: Graph, nodes: np.ndarray) -> Graph:
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[nodes] = np.arange(nodes.shape[0])
    e = g.edges()
    e = remap[e]
    e = e[(e >= 0).all(axis=1)]
    return Graph.from_edges(nodes.shape[0], e)


def write_edge_list(g: Graph, stream: IO[str], labels=None) -> None:
    for u, v in g.edges():
        if labels is not None:
            u, v = labels[u], labels[v]
        stream.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# generators


def _clique_edges(nodes: range) -> list[tuple[int, int]]:
    return [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]


class _BridgeAllocator:
    """Hands out the lowest not-yet-bridged member of each clique."""

    def __init__(self, cliques: list[range]):
        self.cliques = cliques
        self.used = [0] * len(cliques)

    def take(self, c: int) -> int:
        node = self.cliques[c][self.used[c]]
        self.used[c] += 1
        return node


def ring_of_cliques(num_cliques: int, clique_size: int) -> Graph:
    """``num_cliques`` copies of K_clique_size joined in a cycle by single edges."""
    if num_cliques < 3 or clique_size < 3:
        raise ValueError("ring_of_cliques needs num_cliques >= 3 and clique_size >= 3")
    cliques = [range(i * clique_size, (i + 1) * clique_size) for i in range(num_cliques)]
    edges = [e for c in cliques for e in _clique_edges(c)]
    alloc = _BridgeAllocator(cliques)
    for i in range(num_cliques):
        j = (i + 1) % num_cliques
        edges.append((alloc.take(i), alloc.take(j)))
    return Graph.from_edges(num_cliques * clique_size, edges)


def bridged_cliques(big: int, small: int) -> Graph:
    """Two K_big and two K_small cliques joined by the four edges
    B1-B2, B1-S1, B2-S2 and S1-S2.

    Node ids: B1, B2, S1, S2 in that order, each a contiguous block.
    """
    if not big >= small >= 3:
        raise ValueError("bridged_cliques needs big >= small >= 3")
    sizes = [big, big, small, small]
    starts = np.concatenate([[0], np.cumsum(sizes)]).tolist()
    cliques = [range(starts[i], starts[i + 1]) for i in range(4)]
    edges = [e for c in cliques for e in _clique_edges(c)]
    alloc = _BridgeAllocator(cliques)
    for a, b in ((0, 1), (0, 2), (1, 3), (2, 3)):
        edges.append((alloc.take(a), alloc.take(b)))
    return Graph.from_edges(starts[-1], edges)


def clique_blocks(sizes: Iterable[int]) -> np.ndarray:
    """Community labels for consecutive node blocks of the given sizes."""
    return np.repeat(np.arange(len(sizes := list(sizes))), sizes)


def common_neighbors(g: Graph, u: int, v: int) -> set[int]:
    if u == v:
        raise ValueError("common_neighbors needs two distinct nodes")
    return set(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True).tolist())
