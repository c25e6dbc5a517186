import random
from fractions import Fraction

import networkx as nx
import pytest

from encounter_net.encounters import AggregateGraph
from encounter_net.structural import (
    avg_degree,
    degree_profile,
    density,
    pseudofractal_graph,
    summarize,
)
from oracles import random_graph, structural_oracle


def graph(n, pairs):
    nodes = [str(i) for i in range(n)]
    return AggregateGraph.from_pairs(nodes, [(str(u), str(v)) for u, v in pairs])


def test_triangle(kernel_module):
    s = summarize(graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert (s.size, s.edges, s.core, s.diameter) == (3, 3, 3, 1)
    assert s.density == 1.0 and s.avg_degree == 2.0
    assert s.avg_clustering == 1.0 and s.avg_path_length == 1.0


def test_path_p4(kernel_module):
    s = summarize(graph(4, [(0, 1), (1, 2), (2, 3)]))
    assert s.diameter == 3
    assert s.avg_path_length == pytest.approx(5 / 3, abs=1e-15)
    assert s.avg_clustering == 0.0


def test_single_node_and_empty():
    s = summarize(graph(1, []))
    assert (s.size, s.edges, s.core, s.diameter) == (1, 0, 1, 0)
    assert s.density == s.avg_degree == s.avg_clustering == s.avg_path_length == 0.0
    with pytest.raises(ValueError):
        summarize(graph(0, []))


def test_paths_restricted_to_largest_component():
    # triangle plus a separate long path that is smaller
    g = graph(6, [(0, 1), (1, 2), (2, 3), (4, 5)])
    s = summarize(g)
    assert s.core == 4 and s.diameter == 3


def test_star_profile():
    p = degree_profile(graph(6, [(0, i) for i in range(1, 6)]))
    assert p.degree_counts == {5: 1, 1: 5}
    assert p.ck_profile == {5: 0.0, 1: 0.0}


def test_k4_profile():
    p = degree_profile(graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)]))
    assert p.degree_counts == {3: 4} and p.ck_profile == {3: 1.0}


def _brute_triangles_ck(g):
    adj = {v: set() for v in g.nodes}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    by_k = {}
    for v, nb in adj.items():
        k = len(nb)
        nb = sorted(nb)
        links = sum(1 for i in range(k) for j in range(i + 1, k) if nb[j] in adj[nb[i]])
        c = Fraction(links, k * (k - 1) // 2) if k >= 2 else Fraction(0)
        by_k.setdefault(k, []).append(c)
    return {k: sum(cs) / len(cs) for k, cs in by_k.items()}


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_pseudofractal_ck_is_two_over_k(t, kernel_module):
    g = pseudofractal_graph(t)
    ref = nx.dorogovtsev_goltsev_mendes_graph(t)
    assert len(g.nodes) == ref.number_of_nodes() and len(g.edges) == ref.number_of_edges()
    brute = _brute_triangles_ck(g)
    assert all(c == Fraction(2, k) for k, c in brute.items())
    prof = degree_profile(g)
    for k, c in prof.ck_profile.items():
        assert c == pytest.approx(2 / k, rel=0, abs=1e-15)


def test_summary_matches_oracle_on_random_graphs(kernel_module):
    rng = random.Random(1234)
    for _ in range(30):
        nodes, pairs = random_graph(rng, max_nodes=30)
        g = AggregateGraph.from_pairs(nodes, pairs)
        ref = structural_oracle(nodes, pairs)
        s = summarize(g, threads=1)
        for key in ("size", "edges", "core", "diameter"):
            assert getattr(s, key) == ref[key]
        assert s.avg_path_length == pytest.approx(ref["avg_path_length"], rel=1e-12, abs=1e-12)
        assert s.avg_clustering == pytest.approx(ref["avg_clustering"], rel=1e-12, abs=1e-12)


def test_thread_count_does_not_change_results():
    rng = random.Random(7)
    nodes = [f"v{i:03d}" for i in range(300)]
    pairs = [(nodes[i], nodes[j]) for i in range(300) for j in range(i + 1, 300) if rng.random() < 0.02]
    g = AggregateGraph.from_pairs(nodes, pairs)
    assert summarize(g, threads=1) == summarize(g, threads=4)


def test_identities_to_machine_precision():
    rng = random.Random(99)
    for _ in range(50):
        nodes, pairs = random_graph(rng)
        if len(nodes) < 2:
            continue
        s = summarize(AggregateGraph.from_pairs(nodes, pairs))
        assert s.density == 2 * s.edges / (s.size * (s.size - 1))
        assert s.avg_degree == 2 * s.edges / s.size
        assert 0 <= s.avg_clustering <= 1 and s.core <= s.size
        assert s.avg_path_length <= s.diameter


def test_adding_edge_inside_core_never_hurts():
    rng = random.Random(5)
    for _ in range(40):
        nodes, pairs = random_graph(rng, 25)
        g = AggregateGraph.from_pairs(nodes, pairs)
        before = summarize(g)
        indptr, indices = g.csr()
        from encounter_net.structural import largest_component

        core = [g.nodes[i] for i in largest_component(indptr, indices)]
        missing = [(u, v) for i, u in enumerate(core) for v in core[i + 1:] if (u, v) not in g.edges]
        if not missing:
            continue
        after = summarize(AggregateGraph.from_pairs(nodes, pairs + [rng.choice(missing)]))
        assert after.core >= before.core
        assert after.diameter <= before.diameter


@pytest.mark.parametrize(
    "size, edges, k",
    [(3109, 120273, 77.37), (11853, 58111, 9.80), (13476, 126768, 18.81)],
)
def test_published_rows_average_degree(size, edges, k):
    assert abs(avg_degree(size, edges) - k) <= 0.01


def test_density_helper_small_sizes():
    assert density(1, 0) == 0.0 and density(2, 1) == 1.0
