import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mwconsensus.balance import (Bipartition, balancing_set, canonical_bipartitions,
                                 enumerate_nbs, enumerate_nbs_bruteforce, gauge_consensus_space,
                                 gauge_matrix, is_structurally_balanced, merge_check,
                                 path_null_space, path_sign, pn_spanning_tree, walk_nodes)
from mwconsensus.errors import NotAPath, PathTouchesCore, TooManyNodes, VertexInCore
from mwconsensus.graph import MatrixWeightedGraph, laplacian
from mwconsensus.subspace import contains, equals, null_space
from mwconsensus.verify import GeneratorConfig, random_graph

from conftest import scalar_edge


def edge_set(g, idx):
    return {g.edges[k].nodes for k in idx}


def naive_nbs(g):
    """Independent oracle: all 2^n sign vectors, balancing set by definition, kernel by eigh."""
    found = set()
    for signs in itertools.product([1, -1], repeat=g.n):
        if signs[0] != 1:
            continue
        members = []
        for k, e in enumerate(g.edges):
            same = signs[e.u - 1] == signs[e.v - 1]
            positive = np.linalg.eigvalsh(e.weight.entries).sum() > 0
            if same != positive:
                members.append(k)
        if members:
            stacked = sum(g.edges[k].weight.abs_entries for k in members)
            null_dim = int(np.sum(np.linalg.eigvalsh(stacked) <= 1e-9 * max(1, stacked.max())))
        else:
            null_dim = g.d
        if null_dim:
            found.add((signs, tuple(members), null_dim))
    return found


class TestBipartition:
    def test_order_and_count(self):
        parts = list(canonical_bipartitions(3))
        assert [p.signs for p in parts] == [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]

    def test_too_many_nodes(self):
        with pytest.raises(TooManyNodes):
            next(canonical_bipartitions(25))

    def test_str_and_canonical(self):
        p = Bipartition.from_sides(5, [2, 3, 4])
        assert str(p) == "{2,3,4}/{1,5}"
        assert p.signs == (-1, 1, 1, 1, -1)
        assert p.canonical() == -p
        assert (-p).canonical() == -p

    @given(st.integers(1, 10), st.data())
    def test_from_index_round_trip(self, n, data):
        k = data.draw(st.integers(0, 2 ** (n - 1) - 1))
        p = Bipartition.from_index(n, k)
        assert p.signs[0] == 1
        assert Bipartition.from_sides(n, sorted(p.v1)) == p
        assert p.v1 | p.v2 == set(range(1, n + 1))


class TestBalancingSet:
    def test_g1_unique_nbs(self, g1):
        rep = enumerate_nbs(g1)
        assert rep.nbs_count == 1 and rep.nbs_unique
        b = rep.nbs_list[0]
        assert edge_set(g1, b.edges) == {(2, 3)}
        assert b.partition == Bipartition.from_sides(5, [1, 5])
        assert b.null.dimension == 1 and contains(b.null, [1, 1, 0])
        assert rep.structurally_balanced is None
        assert rep.pn_spanning_tree is None

    def test_g1_balancing_set_of_other_partition_is_trivial(self, g1):
        b = balancing_set(g1, Bipartition.from_sides(5, [1, 2, 3, 4, 5]))
        assert edge_set(g1, b.edges) == {(1, 2), (2, 3), (4, 5)}
        assert not b.is_nontrivial

    def test_g1_mod_two_nbs(self, g1_mod):
        rep = enumerate_nbs(g1_mod)
        assert rep.nbs_count == 2 and not rep.nbs_unique
        parts = {b.partition for b in rep.nbs_list}
        assert parts == {Bipartition.from_sides(5, [1, 5]), Bipartition.from_sides(5, [1, 3, 5])}

    def test_g1_negdef_tree_no_nbs(self, g1_negdef):
        rep = enumerate_nbs(g1_negdef)
        assert rep.nbs_count == 0
        assert edge_set(g1_negdef, rep.pn_spanning_tree) == {(1, 2), (2, 3), (3, 4), (4, 5)}

    def test_counter_unique_nbs_without_tree(self, g_counter):
        rep = enumerate_nbs(g_counter)
        assert rep.nbs_count == 1
        b = rep.nbs_list[0]
        assert edge_set(g_counter, b.edges) == {(2, 3), (2, 5), (4, 6)}
        assert b.partition.signs == (1,) * 7
        assert b.null.dimension == 2
        assert rep.pn_spanning_tree is None

    def test_complement_gives_same_set(self, g1):
        p = Bipartition.from_sides(5, [2, 4])
        assert balancing_set(g1, p).edges == balancing_set(g1, -p).edges

    def test_balanced_graph_has_empty_nbs(self):
        g = scalar_edge(-1.0)
        rep = enumerate_nbs(g)
        assert rep.structurally_balanced == Bipartition((1, -1))
        assert rep.has_empty_nbs and rep.nbs_list[0].null.dimension == 1

    def test_negating_balancing_set_balances(self, g1):
        # flipping the sign of every member makes the partition structurally balanced
        p = Bipartition.from_sides(5, [2, 3])
        b = balancing_set(g1, p)
        flipped = g1
        for k in b.edges:
            flipped = flipped.with_weight(k, -g1.edges[k].weight.entries)
        assert is_structurally_balanced(flipped) in (p.canonical(), -p.canonical())
        assert balancing_set(flipped, p).is_empty

    def test_bruteforce_matches_on_fixtures(self, g1, g1_mod, g1_negdef, g_counter, planted):
        for g in (g1, g1_mod, g1_negdef, g_counter, planted):
            fast = [(b.partition, b.edges) for b in enumerate_nbs(g).nbs_list]
            slow = [(b.partition, b.edges) for b in enumerate_nbs_bruteforce(g)]
            assert fast == slow

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1), st.booleans())
    def test_agrees_with_naive_oracle(self, n, d, seed, shared):
        g = random_graph(GeneratorConfig(n=n, d=d, seed=seed, semidef_fraction=0.8,
                                         shared_kernels=shared))
        ours = {(b.partition.signs, b.edges, b.null.dimension) for b in enumerate_nbs(g).nbs_list}
        assert ours == naive_nbs(g)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_pn_tree_allows_at_most_one_nbs(self, n, d, seed):
        g = random_graph(GeneratorConfig(n=n, d=d, seed=seed, force_pn_tree=True))
        rep = enumerate_nbs(g)
        assert rep.pn_spanning_tree is not None
        assert rep.nbs_count <= 1


class TestStructuralBalance:
    def test_scalar_cases(self):
        assert is_structurally_balanced(scalar_edge(1.0)) == Bipartition((1, 1))
        assert is_structurally_balanced(scalar_edge(-1.0)) == Bipartition((1, -1))

    def test_negative_triangle_unbalanced(self):
        g = MatrixWeightedGraph.from_arrays(3, 1, [(1, 2, [[-1.0]]), (2, 3, [[-1.0]]),
                                                   (1, 3, [[-1.0]])])
        assert is_structurally_balanced(g) is None

    def test_balanced_graph_null_space(self):
        g = MatrixWeightedGraph.from_arrays(3, 2, [(1, 2, -np.eye(2)), (2, 3, np.eye(2))])
        p = is_structurally_balanced(g)
        assert p == Bipartition((1, -1, -1))
        expect = gauge_consensus_space(p, null_space(np.zeros((0, 2))))
        assert equals(null_space(laplacian(g)), expect)


class TestPNTree:
    def test_none_for_semidefinite_bridge(self):
        g = MatrixWeightedGraph.from_arrays(2, 2, [(1, 2, np.diag([1.0, 0.0]))])
        assert pn_spanning_tree(g) is None

    def test_uses_definite_edges(self, g1_negdef):
        tree = pn_spanning_tree(g1_negdef)
        assert len(tree) == 4
        assert all(g1_negdef.edges[k].weight.definite for k in tree)


def test_gauge_matrix_is_involution():
    D = gauge_matrix((1, -1, 1), 2)
    assert np.array_equal(D @ D, np.eye(6))
    assert np.array_equal(np.diag(D), [1, 1, -1, -1, 1, 1])


class TestPaths:
    @pytest.fixture
    def path_graph(self):
        # 1 -(+, ker e2)- 2 -(-, ker e1)- 3 -(+, definite)- 4
        return MatrixWeightedGraph.from_arrays(4, 2, [
            (1, 2, np.diag([1.0, 0.0])),
            (2, 3, -np.diag([0.0, 1.0])),
            (3, 4, np.eye(2)),
        ])

    def test_walk(self, path_graph):
        assert walk_nodes(path_graph, [0, 1, 2]) == [1, 2, 3, 4]
        assert walk_nodes(path_graph, [2, 1, 0]) == [4, 3, 2, 1]
        with pytest.raises(NotAPath):
            walk_nodes(path_graph, [0, 2])

    def test_sign(self, path_graph):
        assert path_sign(path_graph, [0, 1, 2]) == -1
        assert path_sign(path_graph, [2]) == 1

    def test_null_space(self, path_graph):
        assert path_null_space(path_graph, [0, 1]).dimension == 2
        assert path_null_space(path_graph, [0]).dimension == 1
        assert path_null_space(path_graph, [2]).is_trivial


class TestMergeCheck:
    @staticmethod
    def graph(w31, w32):
        # core {1,2} joined by a definite positive edge; vertex 3 hangs off both
        return MatrixWeightedGraph.from_arrays(3, 2, [
            (1, 2, np.eye(2)), (3, 1, w31), (3, 2, w32)])

    def test_merges(self):
        g = self.graph(np.diag([1.0, 0]), np.diag([0, 1.0]))
        assert merge_check(g, [1, 2], Bipartition((1, 1)), 3, [[1], [2]])

    def test_sign_disagreement(self):
        g = self.graph(np.diag([1.0, 0]), -np.diag([0, 1.0]))
        assert not merge_check(g, [1, 2], Bipartition((1, 1)), 3, [[1], [2]])

    def test_sign_agreement_through_core_division(self):
        g = self.graph(np.diag([1.0, 0]), -np.diag([0, 1.0]))
        assert merge_check(g, [1, 2], Bipartition((1, -1)), 3, [[1], [2]])

    def test_shared_kernel(self):
        g = self.graph(np.diag([1.0, 0]), np.diag([1.0, 0]))
        assert not merge_check(g, [1, 2], Bipartition((1, 1)), 3, [[1], [2]])

    def test_errors(self):
        g = self.graph(np.diag([1.0, 0]), np.diag([0, 1.0]))
        with pytest.raises(VertexInCore):
            merge_check(g, [1, 2], Bipartition((1, 1)), 1, [[0]])
        with pytest.raises(PathTouchesCore):
            merge_check(g, [1, 2], Bipartition((1, 1)), 3, [[1, 0]])
        g4 = MatrixWeightedGraph.from_arrays(4, 1, [(1, 2, [[1.0]]), (3, 4, [[1.0]]),
                                                    (4, 1, [[1.0]])])
        with pytest.raises(NotAPath):
            merge_check(g4, [1, 2], Bipartition((1, 1)), 3, [[1]])

    def test_merged_vertex_follows_core(self):
        # numeric consequence: when the check passes, null(L) restricted to the core
        # determines vertex 3 as the predicted signed copy
        g = self.graph(np.diag([1.0, 0]), np.diag([0, 1.0]))
        assert merge_check(g, [1, 2], Bipartition((1, 1)), 3, [[1], [2]])
        s = null_space(laplacian(g))
        for v in s.basis.T:
            x = v.reshape(3, 2)
            assert np.allclose(x[2], x[0], atol=1e-10)
