import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpcomm import datasets, fastfp
from fpcomm.graph import Graph, bridged_cliques, clique_blocks
from fpcomm.quality import Partition, cross_edges, fp, merge_delta_sizes

from conftest import random_graph

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
K5 = Graph.from_edges(5, list(itertools.combinations(range(5), 2)))
PATH = Graph.from_edges(3, [(0, 1), (1, 2)])


def brute_weights(g, threshold, edge_mode):
    """Per-pair weights straight from the definition, over all of V x V."""
    adj = [set(a) for a in g.adj]
    out = {}
    for u, v in itertools.combinations(range(g.n), 2):
        cn = adj[u] & adj[v]
        ordered = sum(1 for w1 in cn for w2 in cn if w1 != w2 and w2 in adj[w1])
        e = ordered if edge_mode == "ordered" else ordered // 2
        w = 2 * len(cn) + e + (v in adj[u])
        if w >= threshold:
            out[(u, v)] = w
    return out


def test_pair_weight_examples():
    assert fastfp.pair_weight(Graph.from_edges(2, [(0, 1)]), 0, 1) == 1
    assert fastfp.pair_weight(K3, 0, 1) == 3
    assert fastfp.pair_weight(K4, 0, 1, "ordered") == 7
    assert fastfp.pair_weight(K4, 0, 1, "unordered") == 6
    with pytest.raises(ValueError):
        fastfp.pair_weight(K3, 2, 2)
    with pytest.raises(ValueError):
        fastfp.pair_weight(K3, 0, 1, "sideways")


def test_pair_weight_symmetric():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 15, 0.4)
    for u, v in itertools.combinations(range(15), 2):
        assert fastfp.pair_weight(g, u, v) == fastfp.pair_weight(g, v, u)


def test_candidate_graph_examples():
    assert len(fastfp.build_candidate_graph(PATH)) == 0
    assert fastfp.build_candidate_graph(K3).as_dict() == {(0, 1): 3, (0, 2): 3, (1, 2): 3}
    k4 = fastfp.build_candidate_graph(K4, 3, "ordered").as_dict()
    assert k4 == {pair: 7 for pair in itertools.combinations(range(4), 2)}


@pytest.mark.parametrize("edge_mode", ["unordered", "ordered"])
@pytest.mark.parametrize("threshold", [1, 2, 3, 5])
@pytest.mark.parametrize("seed", range(6))
def test_candidate_completeness(seed, threshold, edge_mode):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(2, 65)), rng.uniform(0.02, 0.5))
    expected = brute_weights(g, threshold, edge_mode)
    assert fastfp.candidate_graph_numba(g, threshold, edge_mode).as_dict() == expected
    assert fastfp.candidate_graph_numpy(g, threshold, edge_mode).as_dict() == expected


def test_threshold_validation():
    with pytest.raises(ValueError):
        fastfp.build_candidate_graph(K3, 0)


def test_seeds_k5():
    seeds, leftovers, weights = fastfp.extract_seeds(fastfp.build_candidate_graph(K5))
    assert seeds == [[0, 1, 2, 3, 4]]
    assert leftovers == []
    assert len(weights) == 1


def test_seeds_path():
    seeds, leftovers, _ = fastfp.extract_seeds(fastfp.build_candidate_graph(PATH))
    assert seeds == [] and leftovers == [0, 1, 2]


def test_seeds_two_triangles():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    seeds, leftovers, _ = fastfp.extract_seeds(fastfp.build_candidate_graph(g))
    assert seeds == [[0, 1, 2], [3, 4, 5]] and leftovers == []


def test_seed_common_neighbours_come_from_surviving_candidate_graph():
    # 0-1 is the strongest pair; 2 and 3 both sit next to it. The second seed
    # must not pick up nodes already used by the first.
    g = Graph.from_edges(7, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5), (5, 6), (4, 6)])
    g2 = fastfp.build_candidate_graph(g)
    seeds, leftovers, weights = fastfp.extract_seeds(g2)
    flat = sorted(x for s in seeds for x in s) + leftovers
    assert sorted(flat) == list(range(7))
    assert seeds[0] == [0, 1, 2, 3]
    assert weights == sorted(weights, reverse=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_seed_weights_non_increasing(n, seed):
    g = random_graph(np.random.default_rng(seed), n)
    seeds, leftovers, weights = fastfp.extract_seeds(fastfp.build_candidate_graph(g))
    assert weights == sorted(weights, reverse=True)
    assert sorted([x for s in seeds for x in s] + leftovers) == list(range(n))


def test_merge_13_cross_edges():
    edges = [(a, b) for lo in (0, 5) for a in range(lo, lo + 5) for b in range(a + 1, lo + 5)]
    edges += [(a, b) for a in range(5) for b in range(5, 10)][:13]
    g = Graph.from_edges(10, edges)
    comms, deltas = fastfp.merge_communities(g, [list(range(5)), list(range(5, 10))])
    assert comms == [list(range(10))] and deltas == [1]


def test_merge_12_cross_edges_is_not_enough():
    edges = [(a, b) for a in range(5) for b in range(5, 10)][:12]
    g = Graph.from_edges(10, edges)
    comms, deltas = fastfp.merge_communities(g, [list(range(5)), list(range(5, 10))])
    assert len(comms) == 2 and deltas == []


def test_merge_bridged_cliques_idle():
    g = bridged_cliques(20, 5)
    comms = [np.flatnonzero(clique_blocks([20, 20, 5, 5]) == c).tolist() for c in range(4)]
    merged, deltas = fastfp.merge_communities(g, comms)
    assert len(merged) == 4 and deltas == []


def test_merge_two_singletons():
    g = Graph.from_edges(2, [(0, 1)])
    comms, deltas = fastfp.merge_communities(g, [[0], [1]])
    assert comms == [[0, 1]] and deltas == [1]


def literal_merge(g, comms):
    """Scan ordered pairs, merge the first qualifying one, restart."""
    comms = [sorted(c) for c in comms]
    adj = g.adj
    while True:
        ranked = sorted(comms, key=lambda c: (-len(c), c[0]))
        for i, j in itertools.combinations(range(len(ranked)), 2):
            c1, c2 = ranked[i], ranked[j]
            s2 = set(c2)
            cc = sum(1 for a in c1 for b in adj[a] if b in s2)
            if cc > len(c1) * len(c2) / 2:
                comms = [c for k, c in enumerate(ranked) if k not in (i, j)] + [sorted(c1 + c2)]
                break
        else:
            return sorted(comms)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_merge_matches_literal_restart_scan(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n)
    labels = rng.integers(0, max(1, n // 2), size=n)
    comms = [np.flatnonzero(labels == c).tolist() for c in np.unique(labels)]
    merged, deltas = fastfp.merge_communities(g, comms)
    assert merged == literal_merge(g, comms)
    assert all(d > 0 for d in deltas)
    before = fp(g, Partition.from_communities(g, comms)).correct
    after = fp(g, Partition.from_communities(g, merged)).correct
    assert after - before == sum(deltas)


def test_merges_strictly_improve_on_fixture():
    g, _ = datasets.load("lesmis")
    p, report = fastfp.run(g)
    assert all(d > 0 for d in report.merge_deltas)
    # no remaining pair qualifies
    comms = list(p.members)
    for i, a in enumerate(comms):
        for b in comms[i + 1 :]:
            e = cross_edges(g, p, a, b)
            assert merge_delta_sizes(int(p.size[a]), int(p.size[b]), e) <= 0


@pytest.mark.parametrize(
    "name, expected",
    [("karate", 0.6791), ("florentine", 0.8762), ("lesmis", 0.8516), ("football", 0.8828)],
)
def test_fixture_scores_near_reference(name, expected):
    g, _ = datasets.load(name)
    p, report = fastfp.run(g)
    assert report.final_fp == fp(g, p)
    assert abs(report.final_fp.value - expected) <= 0.05
    assert sorted(x for c in p.communities() for x in c) == list(range(g.n))


@pytest.mark.parametrize(
    "name, frac",
    [("karate", (381, 561)), ("florentine", (92, 105)), ("lesmis", (2492, 2926)), ("football", (5801, 6555))],
)
def test_exact_fixture_counts(name, frac):
    g, _ = datasets.load(name)
    _, report = fastfp.run(g)
    assert (report.final_fp.correct, report.final_fp.total) == frac


def test_deterministic():
    g, _ = datasets.load("football")
    a, ra = fastfp.run(g)
    b, rb = fastfp.run(g)
    assert np.array_equal(a.labels(), b.labels())
    assert ra.seed_weights == rb.seed_weights
