import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mwconsensus.errors import (DimensionMismatch, Disconnected, DuplicateEdge, Indefinite,
                                NotSymmetric, SelfLoop, ZeroMatrix)
from mwconsensus.graph import (MatrixWeightedGraph, SignClass, classify_weight,
                               graph_from_dict, graph_to_dict, graphs_equal, laplacian,
                               laplacian_via_incidence, signed_incidence)
from mwconsensus.verify import GeneratorConfig, random_graph

from conftest import A12, A23, A24, scalar_edge


def protocol_rhs(g, x):
    """-sum_j |A_ij| (x_i - sgn(A_ij) x_j), evaluated agent by agent."""
    d = g.d
    xs = x.reshape(g.n, d)
    out = np.zeros_like(xs)
    for e in g.edges:
        i, j, w = e.u - 1, e.v - 1, e.weight
        out[i] -= w.abs_entries @ (xs[i] - w.sign * xs[j])
        out[j] -= w.abs_entries @ (xs[j] - w.sign * xs[i])
    return out.ravel()


class TestClassifyWeight:
    def test_identity(self):
        w = classify_weight(np.eye(3))
        assert w.sign_class is SignClass.POS_DEF
        assert w.null_basis.dimension == 0

    def test_a23_is_negative_semidefinite(self):
        w = classify_weight(A23)
        assert w.sign_class is SignClass.NEG_SEMIDEF
        assert w.null_basis.dimension == 1
        v = w.null_basis.basis[:, 0]
        assert abs(abs(v @ np.array([1, 1, 0])) / np.sqrt(2) - 1) < 1e-12

    def test_a24_is_positive_semidefinite(self):
        w = classify_weight(A24)
        assert w.sign_class is SignClass.POS_SEMIDEF
        assert np.allclose(np.abs(w.null_basis.basis[:, 0]), [0, 1, 0])

    def test_a12_negative_definite(self):
        w = classify_weight(A12)
        assert w.sign_class is SignClass.NEG_DEF
        assert w.sign == -1
        assert np.array_equal(w.abs_entries, -A12)

    def test_indefinite(self):
        with pytest.raises(Indefinite):
            classify_weight(np.diag([1.0, -1.0]))

    def test_zero(self):
        with pytest.raises(ZeroMatrix):
            classify_weight(np.zeros((2, 2)))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            classify_weight([[1.0, 0.5], [0.0, 1.0]])

    def test_near_singular_definite_stays_definite(self):
        w = classify_weight(np.diag([1.0, 1e-6]))
        assert w.sign_class is SignClass.POS_DEF

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 10_000), st.booleans())
    def test_class_agrees_with_null_dimension(self, d, seed, negative):
        rng = np.random.default_rng(seed)
        rank = int(rng.integers(1, d + 1))
        b = rng.normal(size=(rank, d))
        m = b.T @ b
        w = classify_weight(-m if negative else m)
        assert w.definite == (w.null_basis.dimension == 0)
        assert w.null_basis.dimension == d - rank
        assert np.all(np.linalg.eigvalsh(w.abs_entries) >= -1e-9 * max(1, np.abs(m).max()))


class TestValidate:
    def test_g1_ok(self, g1):
        assert (g1.n, g1.d, g1.num_edges) == (5, 3, 6)

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            MatrixWeightedGraph.from_arrays(2, 1, [])

    def test_self_loop(self):
        with pytest.raises(SelfLoop):
            MatrixWeightedGraph.from_arrays(1, 1, [(1, 1, [[1.0]])])

    def test_duplicate(self):
        with pytest.raises(DuplicateEdge):
            MatrixWeightedGraph.from_arrays(2, 1, [(1, 2, [[1.0]]), (2, 1, [[2.0]])])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            MatrixWeightedGraph.from_arrays(2, 2, [(1, 2, np.eye(3))])

    def test_error_names_edge(self):
        doc = {"nodes": 3, "dimension": 2, "edges": [
            {"u": 1, "v": 2, "weight": [[1, 0], [0, 1]]},
            {"u": 2, "v": 3, "weight": [[1, 0], [0, -1]]}]}
        with pytest.raises(Indefinite, match=r"edge 1 \(2,3\)"):
            graph_from_dict(doc)


class TestLaplacian:
    def test_scalar_positive(self):
        assert np.array_equal(laplacian(scalar_edge(1.0)), [[1, -1], [-1, 1]])

    def test_scalar_negative(self):
        assert np.array_equal(laplacian(scalar_edge(-1.0)), [[1, 1], [1, 1]])
        assert np.array_equal(laplacian_via_incidence(scalar_edge(-1.0)), [[1, 1], [1, 1]])

    def test_g1_two_constructions_agree(self, g1):
        L = laplacian(g1)
        assert L.shape == (15, 15)
        assert np.max(np.abs(L - laplacian_via_incidence(g1))) <= 1e-12

    def test_matches_protocol(self, g1):
        x = np.random.default_rng(3).normal(size=15)
        assert np.allclose(-laplacian(g1) @ x, protocol_rhs(g1, x), atol=1e-12)

    def test_block_row_sums(self, g1):
        L = laplacian(g1)
        d = g1.d
        for i in range(1, g1.n + 1):
            rows = L[(i - 1) * d:i * d]
            total = sum(rows[:, (j - 1) * d:j * d] for j in range(1, g1.n + 1))
            expect = sum(e.weight.abs_entries - e.weight.entries
                         for e in g1.edges if i in e.nodes)
            assert np.allclose(total, expect, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_lemma1_and_psd_on_random_graphs(self, n, d, seed):
        g = random_graph(GeneratorConfig(n=n, d=d, seed=seed))
        L = laplacian(g)
        assert np.max(np.abs(L - laplacian_via_incidence(g))) <= 1e-10
        assert np.allclose(L, L.T)
        lam = np.linalg.eigvalsh(L)
        assert lam[0] >= -1e-9 * max(1, lam[-1])
        x = np.random.default_rng(seed).normal(size=n * d)
        assert np.allclose(-L @ x, protocol_rhs(g, x), atol=1e-9)


class TestIncidence:
    def test_positive_edge(self):
        g = MatrixWeightedGraph.from_arrays(2, 2, [(1, 2, np.eye(2))])
        assert np.array_equal(signed_incidence(g), np.hstack([np.eye(2), -np.eye(2)]))

    def test_negative_edge(self):
        g = MatrixWeightedGraph.from_arrays(2, 2, [(1, 2, -np.eye(2))])
        assert np.array_equal(signed_incidence(g), np.hstack([np.eye(2), np.eye(2)]))

    def test_g1_structure(self, g1):
        H = signed_incidence(g1)
        assert H.shape == (18, 15)
        eye = np.eye(3)
        for k in range(6):
            blocks = [H[3 * k:3 * k + 3, 3 * j:3 * j + 3] for j in range(5)]
            nonzero = [b for b in blocks if np.any(b)]
            assert len(nonzero) == 2
            assert all(np.array_equal(b, eye) or np.array_equal(b, -eye) for b in nonzero)


@pytest.mark.parametrize("name", ["g1", "g1_mod_a34", "g1_a23_negdef", "g_counter",
                                  "planted_unique_nbs"])
def test_fixture_round_trip(name):
    from mwconsensus.cli import fixture_path
    doc = json.loads(fixture_path(name).read_text())
    g = graph_from_dict(doc)
    again = graph_from_dict(json.loads(json.dumps(graph_to_dict(g))))
    assert graphs_equal(g, again)
