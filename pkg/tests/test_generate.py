from dpstab.generate import (
    bipartite_graphs_of_order,
    connected_bipartite_graphs,
    graphs_of_order,
    regular_graphs,
)
from dpstab.graph import is_bipartite, is_connected, valency
from dpstab.permgroup import certificate

# graph counts on 1..7 vertices and related sequences (standard tables)
ALL = [1, 2, 4, 11, 34, 156, 1044]
BIPARTITE = [1, 2, 3, 7, 13, 35, 88, 303]
CONNECTED_BIPARTITE = [1, 1, 1, 3, 5, 17, 44, 182]


def test_all_graph_counts():
    assert [len(graphs_of_order(n)) for n in range(1, 8)] == ALL


def test_graph_lists_are_isomorphism_free():
    for n in range(1, 8):
        certs = [certificate(g) for g in graphs_of_order(n)]
        assert len(set(certs)) == len(certs)


def test_regular_counts():
    assert [len(regular_graphs(10, k)) for k in range(10)] == [1, 1, 5, 21, 60, 60, 21, 5, 1, 1]
    assert [len(regular_graphs(8, k)) for k in range(8)] == [1, 1, 3, 6, 6, 3, 1, 1]
    assert regular_graphs(7, 3) == ()


def test_regular_graphs_match_filtered_enumeration():
    for n in range(1, 8):
        for k in range(n):
            expect = {certificate(g) for g in graphs_of_order(n) if valency(g) == k}
            assert {certificate(g) for g in regular_graphs(n, k)} == expect


def test_bipartite_counts():
    assert [len(bipartite_graphs_of_order(n)) for n in range(1, 9)] == BIPARTITE
    assert [len(connected_bipartite_graphs(n)) for n in range(1, 9)] == CONNECTED_BIPARTITE


def test_bipartite_lists_match_filtered_enumeration():
    for n in range(1, 8):
        expect = {certificate(g) for g in graphs_of_order(n) if is_bipartite(g)}
        assert {certificate(g) for g in bipartite_graphs_of_order(n)} == expect
        assert all(is_connected(g) for g in connected_bipartite_graphs(n))
