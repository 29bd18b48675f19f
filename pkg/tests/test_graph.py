from __future__ import annotations

import random

import networkx as nx
import pytest

from lcsolve.graph import (DuplicateEdge, GraphError, SelfLoop, VertexOutOfRange, build_graph,
                           closed_ball, complete_graph, connected_graphs, cycle_graph, format_gr,
                           graph_power, parse_gr, path_graph, random_graph, transform_jagged,
                           transform_subdivision)


def edge_set(g):
    return {frozenset(e) for e in g.edges}


def test_build_path():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert g.n == 3 and g.m == 2
    assert g.adj == ((1,), (0, 2), (1,))
    assert all(g.label(u, v) == "1" for u, v in g.edges)
    assert g.label(2, 1) == "1"


def test_build_single_vertex():
    g = build_graph(1, [])
    assert g.n == 1 and g.m == 0 and g.adj == ((),)


@pytest.mark.parametrize("edges, error", [
    ([(0, 1), (0, 1)], DuplicateEdge),
    ([(0, 1), (1, 0)], DuplicateEdge),
    ([(1, 1)], SelfLoop),
    ([(0, 3)], VertexOutOfRange),
])
def test_build_rejects(edges, error):
    with pytest.raises(error):
        build_graph(3, edges)


def test_labels_kept():
    g = build_graph(3, [(0, 1, "0"), (1, 2)])
    assert g.label(1, 0) == "0" and g.label(1, 2) == "1"
    with pytest.raises(KeyError):
        g.label(0, 2)


def test_power_of_path():
    h = graph_power(path_graph(4), 2)
    assert edge_set(h) == {frozenset(e) for e in [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]}


def test_power_one_is_identity():
    g = cycle_graph(6)
    assert edge_set(graph_power(g, 1)) == edge_set(g)


def test_square_of_c5_is_complete():
    assert graph_power(cycle_graph(5), 2).is_complete()


def test_power_matches_networkx():
    rng = random.Random(3)
    for _ in range(20):
        g = random_graph(rng.randint(2, 15), 3, rng)
        nxg = nx.Graph(list(g.edges))
        nxg.add_nodes_from(range(g.n))
        for p in (2, 3):
            want = {frozenset((u, v)) for u, d in nx.all_pairs_shortest_path_length(nxg, cutoff=p)
                    for v in d if u != v}
            assert edge_set(graph_power(g, p)) == want


def test_subdivision():
    s, vmap = transform_subdivision(complete_graph(3))
    assert s.n == 6 and s.m == 6
    assert nx.is_isomorphic(nx.Graph(list(s.edges)), nx.cycle_graph(6))
    assert vmap.is_edge_vertex(3) and not vmap.is_edge_vertex(0)
    assert transform_subdivision(build_graph(1, []))[0].n == 1
    p3 = transform_subdivision(path_graph(2))[0]
    assert (p3.n, p3.m) == (3, 2) and p3.degree(2) == 2


def test_jagged():
    j, vmap = transform_jagged(path_graph(2))
    assert (j.n, j.m) == (3, 3) and j.is_complete()
    assert vmap.edge_vertex(1, 0) == 2
    assert transform_jagged(build_graph(1, []))[0].n == 1
    j3 = transform_jagged(path_graph(3))[0]
    assert (j3.n, j3.m) == (5, 6)


def test_closed_ball():
    p5 = path_graph(5)
    assert len(closed_ball(p5, 2, 1)) == 3
    assert closed_ball(p5, 0, 2) == frozenset({0, 1, 2})
    assert closed_ball(p5, 3, 0) == frozenset({3})


def test_gr_round_trip():
    g = build_graph(4, [(0, 1), (1, 2, "0"), (2, 3)])
    h = parse_gr(format_gr(g))
    assert h.edges == g.edges and h.labels == g.labels
    assert parse_gr("c comment\np tw 2 1\n1 2\n").m == 1


@pytest.mark.parametrize("text", ["1 2\n", "p tw 2 1\n1\n", "p tw 2 1\n1 x\n", "p td 2 1\n"])
def test_gr_rejects(text):
    with pytest.raises(GraphError):
        parse_gr(text)


def test_connected_graph_counts():
    assert [len(connected_graphs(n)) for n in range(1, 7)] == [1, 1, 2, 6, 21, 112]
    for n in range(2, 6):
        gs = [nx.Graph(list(g.edges)) for g in connected_graphs(n)]
        assert all(nx.is_connected(x) for x in gs)
        for a in range(len(gs)):
            for b in range(a + 1, len(gs)):
                assert not nx.is_isomorphic(gs[a], gs[b])


def test_random_graph_respects_degree():
    rng = random.Random(1)
    for _ in range(50):
        g = random_graph(rng.randint(1, 30), 4, rng)
        assert g.max_degree() <= 4 and g.is_connected()


def test_all_graph_classes():
    from corpus import all_graphs
    assert [len(all_graphs(n)) for n in range(7)] == [1, 1, 2, 4, 11, 34, 156]
