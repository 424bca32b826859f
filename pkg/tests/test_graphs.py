import networkx as nx
import numpy as np
import pytest

from twodist.graphs import (Graph, GraphFormatError, adjacency_matrix, classify,
                            cluster_graph, complement, complete_graph,
                            complete_multipartite_graph, cycle_graph,
                            encode_graph6, from_mask, null_graph, parse_edge_list,
                            parse_graph6, path_graph, to_mask)


def random_graph(rng, n, p=0.5):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, pairs)


class TestGraphBasics:
    def test_from_edges_normalizes(self):
        g = Graph.from_edges(3, [(2, 0), (0, 2), (1, 2)])
        assert g.num_edges == 2
        assert g.has_edge(0, 2) and g.has_edge(2, 1)
        assert not g.has_edge(0, 1)

    def test_rejects_loops_and_bad_ids(self):
        with pytest.raises(GraphFormatError):
            Graph.from_edges(3, [(1, 1)])
        with pytest.raises(GraphFormatError):
            Graph.from_edges(3, [(0, 3)])
        with pytest.raises(GraphFormatError):
            Graph(0, frozenset())

    def test_degrees_and_regularity(self):
        assert cycle_graph(5).is_regular() == 2
        assert complete_graph(4).is_regular() == 3
        assert path_graph(4).is_regular() is None
        assert path_graph(4).degrees() == [1, 2, 2, 1]

    def test_neighbors_sorted(self):
        g = Graph.from_edges(4, [(0, 3), (0, 1)])
        assert g.neighbors(0) == [1, 3]

    def test_complement_involution(self, rng):
        for _ in range(20):
            g = random_graph(rng, int(rng.integers(2, 9)))
            assert complement(complement(g)) == g

    def test_adjacency_matrix(self, bow_tie):
        a = adjacency_matrix(bow_tie)
        assert a.shape == (5, 5)
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) == 0)
        assert a.sum() == 2 * bow_tie.num_edges

    def test_mask_round_trip(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 9))
            mask = int(rng.integers(0, 1 << (n * (n - 1) // 2)))
            assert to_mask(from_mask(n, mask)) == mask


class TestEdgeListParsing:
    def test_basic(self):
        g = parse_edge_list("3\n0 1\n1 2\n")
        assert g.n == 3 and g.num_edges == 2

    def test_blank_lines_ignored(self):
        g = parse_edge_list("\n4\n\n0 1\n\n")
        assert g.n == 4 and g.num_edges == 1

    @pytest.mark.parametrize("text,fragment", [
        ("", "empty"),
        ("x\n", "line 1"),
        ("3\n0 1 2\n", "line 2"),
        ("3\n0 a\n", "line 2"),
        ("3\n1 1\n", "loop"),
        ("3\n0 5\n", "out of range"),
    ])
    def test_errors_carry_line_info(self, text, fragment):
        with pytest.raises(GraphFormatError, match=fragment):
            parse_edge_list(text)


class TestGraph6:
    def test_known_strings(self):
        assert parse_graph6("D~{") == complete_graph(5)
        assert parse_graph6("D??") == null_graph(5)
        assert parse_graph6(">>graph6<<D~{") == complete_graph(5)

    def test_round_trip_against_networkx(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 21))
            g = random_graph(rng, n)
            s = encode_graph6(g)
            assert parse_graph6(s) == g
            h = nx.from_graph6_bytes(s.encode())
            assert set(h.edges()) == {tuple(e) for e in g.edges}
            ref = nx.to_graph6_bytes(h, header=False).strip().decode()
            assert ref == s

    @pytest.mark.parametrize("bad", ["", "~??", "D~{{", "D~", "D\x1f{"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(GraphFormatError):
            parse_graph6(bad)

    def test_rejects_large_n(self):
        with pytest.raises(GraphFormatError):
            encode_graph6(null_graph(63))


class TestClassify:
    def test_tags(self, bow_tie):
        assert classify(complete_graph(4)).tag == "complete"
        assert classify(null_graph(3)).tag == "null"
        assert classify(cluster_graph([3, 2])).tag == "cluster"
        assert classify(complete_multipartite_graph([2, 2, 1])).tag == "complete_multipartite"
        assert classify(bow_tie).tag == "general"

    def test_partitions_sorted(self):
        assert classify(cluster_graph([2, 4, 1])).partition == (4, 2, 1)
        assert classify(complete_multipartite_graph([1, 3, 2])).partition == (3, 2, 1)

    def test_degenerate_flags(self):
        for g in (complete_graph(3), null_graph(4)):
            cls = classify(g)
            assert cls.is_degenerate and cls.is_cluster and cls.is_multipartite

    def test_star_is_multipartite(self):
        # K_{1,3} is complete bipartite
        cls = classify(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
        assert cls.tag == "complete_multipartite"
        assert cls.partition == (3, 1)

    def test_duality_exhaustive_small(self):
        # cluster and complete multipartite swap under complementation
        for n in range(2, 6):
            for mask in range(1 << (n * (n - 1) // 2)):
                g = from_mask(n, mask)
                cls, cbar = classify(g), classify(complement(g))
                assert cls.is_cluster == cbar.is_multipartite
                assert cls.is_multipartite == cbar.is_cluster
