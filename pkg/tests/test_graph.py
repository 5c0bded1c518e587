import gzip
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpcomm import datasets
from fpcomm.graph import (
    EdgeListError,
    Graph,
    bridged_cliques,
    clique_blocks,
    common_neighbors,
    load_edge_list,
    ring_of_cliques,
)


def check_invariants(g: Graph):
    adj = g.adj
    for u in range(g.n):
        assert u not in adj[u]
        for v in adj[u]:
            assert u in adj[v]
        assert list(g.neighbors(u)) == sorted(adj[u])
    assert g.m * 2 == sum(len(a) for a in adj)


def test_triangle():
    g, labels = load_edge_list(b"0 1\n1 2\n2 0\n")
    assert (g.n, g.m) == (3, 3)
    assert labels.tolist() == [0, 1, 2]


def test_dedupe_selfloop_relabel():
    g, labels = load_edge_list(b"# c\n5 7\n7 5\n5 5\n")
    assert (g.n, g.m) == (2, 1)
    assert labels.tolist() == [5, 7]


def test_percent_comments_and_extra_columns():
    g, labels = load_edge_list(b"% konect header\n% 3 3\n10 20 1\n20 30 1 999\n\n")
    assert (g.n, g.m) == (3, 2)
    assert labels.tolist() == [10, 20, 30]


@pytest.mark.parametrize(
    "text, line",
    [(b"0 1\n1 x\n", 2), (b"# ok\n0\n", 2), (b"0 1.5\n", 1)],
)
def test_malformed_reports_line(text, line):
    with pytest.raises(EdgeListError, match=f"line {line}"):
        load_edge_list(text)


@pytest.mark.parametrize("text", [b"", b"# only comments\n%\n"])
def test_empty_input(text):
    with pytest.raises(EdgeListError):
        load_edge_list(text)


def test_gzip_and_path(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wb") as fh:
        fh.write(b"# FromNodeId\tToNodeId\n1\t2\n2\t3\n")
    g, labels = load_edge_list(p)
    assert (g.n, g.m) == (3, 2)
    assert labels.tolist() == [1, 2, 3]


def test_snap_ungraph_sample_format():
    # head of a SNAP com-*.ungraph.txt file: tab separated, '#' header lines
    sample = (
        b"# Undirected graph: ../../data/output/youtube.ungraph.txt\n"
        b"# Youtube\n# Nodes: 1134890 Edges: 2987624\n# FromNodeId\tToNodeId\n"
        b"1\t2\n1\t3\n1\t4\n1\t5\n2\t6\n3\t7\n"
    )
    g, labels = load_edge_list(sample)
    assert (g.n, g.m) == (7, 6)
    assert labels[0] == 1


def test_largest_component():
    g, labels = load_edge_list(b"0 1\n1 2\n2 0\n10 11\n", keep_largest_component=True)
    assert (g.n, g.m) == (3, 3)
    assert labels.tolist() == [0, 1, 2]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=1, max_size=80), st.randoms())
def test_load_is_order_and_direction_invariant(edges, rnd):
    text = "".join(f"{u} {v}\n" for u, v in edges)
    shuffled = [(v, u) if rnd.random() < 0.5 else (u, v) for u, v in edges]
    rnd.shuffle(shuffled)
    text2 = "".join(f"{u} {v}\n" for u, v in shuffled)
    g1, l1 = load_edge_list(text.encode())
    g2, l2 = load_edge_list(text2.encode())
    assert g1 == g2
    assert l1.tolist() == l2.tolist()
    check_invariants(g1)


def test_ring_small():
    g = ring_of_cliques(3, 3)
    assert (g.n, g.m) == (9, 12)
    check_invariants(g)


def test_ring_30_5_size():
    g = ring_of_cliques(30, 5)
    assert (g.n, g.m) == (150, 330)


def test_ring_degrees():
    g = ring_of_cliques(3, 4)
    deg = g.degrees
    assert sorted(deg.tolist()) == [3] * 6 + [4] * 6
    # bridge endpoints: two distinct nodes per clique
    for c in range(3):
        assert np.count_nonzero(deg[c * 4 : (c + 1) * 4] == 4) == 2


@pytest.mark.parametrize("c, k", [(3, 3), (5, 4), (30, 5), (7, 6)])
def test_ring_counts(c, k):
    g = ring_of_cliques(c, k)
    assert g.n == c * k
    assert g.m == c * k * (k - 1) // 2 + c
    labels = clique_blocks([k] * c)
    e = g.edges()
    assert np.count_nonzero(labels[e[:, 0]] != labels[e[:, 1]]) == c
    check_invariants(g)


@pytest.mark.parametrize("b, s, m", [(20, 5, 404), (3, 3, 16)])
def test_bridged_counts(b, s, m):
    g = bridged_cliques(b, s)
    assert g.n == 2 * b + 2 * s
    assert g.m == m
    labels = clique_blocks([b, b, s, s])
    e = g.edges()
    inter = e[labels[e[:, 0]] != labels[e[:, 1]]]
    assert inter.shape[0] == 4
    pairs = sorted(tuple(sorted((labels[u], labels[v]))) for u, v in inter)
    assert pairs == [(0, 1), (0, 2), (1, 3), (2, 3)]
    check_invariants(g)


@pytest.mark.parametrize("args", [(2, 5), (3, 2)])
def test_ring_rejects(args):
    with pytest.raises(ValueError):
        ring_of_cliques(*args)


@pytest.mark.parametrize("args", [(4, 5), (5, 2)])
def test_bridged_rejects(args):
    with pytest.raises(ValueError):
        bridged_cliques(*args)


def test_common_neighbors():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    k5 = Graph.from_edges(5, [(a, b) for a in range(5) for b in range(a + 1, 5)])
    assert common_neighbors(tri, 0, 1) == {2}
    assert common_neighbors(path, 0, 2) == {1}
    assert common_neighbors(k5, 0, 1) == {2, 3, 4}
    with pytest.raises(ValueError):
        common_neighbors(tri, 1, 1)


def test_has_edge_matches_adj():
    rng = random.Random(3)
    g = Graph.from_edges(20, [(rng.randrange(20), rng.randrange(20)) for _ in range(60)])
    for u in range(20):
        for v in range(20):
            assert g.has_edge(u, v) == (v in g.adj[u])


@pytest.mark.parametrize(
    "name, n, m",
    [("karate", 34, 78), ("florentine", 15, 20), ("lesmis", 77, 254), ("football", 115, 613)],
)
def test_bundled_fixture_sizes(name, n, m):
    g, _ = datasets.load(name)
    assert (g.n, g.m) == (n, m)
    check_invariants(g)


def test_facebook_size():
    if datasets.external_path("facebook") is None:
        pytest.skip("facebook_combined not downloaded (scripts/fetch_datasets.py facebook)")
    g, _ = datasets.load("facebook")
    assert (g.n, g.m) == (4039, 88234)
