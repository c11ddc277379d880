"""Structural balance, balancing sets and non-trivial balancing sets (NBS).

A bipartition is a vector of node signs; +1 puts a node in V1. An edge
belongs to the balancing set of a bipartition when it is negative inside
one side or positive across the two sides, i.e. exactly the edges whose
sign must be flipped for the graph to become balanced on that partition.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import NotAPath, PathTouchesCore, TooManyNodes, VertexInCore
from .graph import MatrixWeightedGraph
from .subspace import Subspace, intersect, intersect_nulls, span_sum

MAX_ENUM_NODES = 24


@dataclass(frozen=True)
class Bipartition:
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError("bipartition signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_sides(cls, n: int, v1: Sequence[int]) -> "Bipartition":
        """Partition with the 1-based nodes in ``v1`` on the + side."""
        v1 = set(v1)
        return cls(tuple(1 if i in v1 else -1 for i in range(1, n + 1)))

    @classmethod
    def from_index(cls, n: int, k: int) -> "Bipartition":
        """The k-th canonical partition in lexicographic order (+ before -)."""
        return cls((1,) + tuple(-1 if (k >> (n - 1 - j)) & 1 else 1 for j in range(1, n)))

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def v1(self) -> frozenset[int]:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s == 1)

    @property
    def v2(self) -> frozenset[int]:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s == -1)

    def canonical(self) -> "Bipartition":
        return self if self.signs[0] == 1 else -self

    def sign_of(self, node: int) -> int:
        return self.signs[node - 1]

    def __neg__(self) -> "Bipartition":
        return Bipartition(tuple(-s for s in self.signs))

    def __str__(self):
        def fmt(s):
            return "{" + ",".join(map(str, sorted(s))) + "}"
        return f"{fmt(self.v1)}/{fmt(self.v2)}"


@dataclass(frozen=True)
class BalancingSet:
    partition: Bipartition
    edges: tuple[int, ...]
    null: Subspace

    @property
    def is_empty(self) -> bool:
        return not self.edges

    @property
    def is_nontrivial(self) -> bool:
        return self.null.dimension > 0


@dataclass(frozen=True)
class BalanceReport:
    structurally_balanced: Bipartition | None
    nbs_list: tuple[BalancingSet, ...]
    pn_spanning_tree: tuple[int, ...] | None
    nbs_unique: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "nbs_unique", len(self.nbs_list) == 1)

    @property
    def nbs_count(self) -> int:
        return len(self.nbs_list)

    @property
    def has_empty_nbs(self) -> bool:
        """Whether one of the NBS entries is the empty set of a balanced partition."""
        return any(b.is_empty for b in self.nbs_list)


def canonical_bipartitions(n: int) -> Iterator[Bipartition]:
    if n > MAX_ENUM_NODES:
        raise TooManyNodes(f"n={n} exceeds the enumeration cap of {MAX_ENUM_NODES}")
    if n < 1:
        raise ValueError("n must be positive")
    for k in range(1 << (n - 1)):
        yield Bipartition.from_index(n, k)


def _violating_edges(g: MatrixWeightedGraph, signs: Sequence[int]) -> list[int]:
    return [k for k, e in enumerate(g.edges)
            if (signs[e.u - 1] == signs[e.v - 1]) == (e.weight.sign < 0)]


def balancing_set(g: MatrixWeightedGraph, p: Bipartition) -> BalancingSet:
    """Balancing set of ``p`` with the common kernel of its member weights.

    The partition is used as given (not canonicalised), so ``p`` and ``-p``
    produce the same edges.
    """
    members = _violating_edges(g, p.signs)
    null = intersect_nulls([g.edges[k].weight for k in members], dim=g.d)
    return BalancingSet(p, tuple(members), null)


def is_structurally_balanced(g: MatrixWeightedGraph) -> Bipartition | None:
    """Two-colour the graph; positive edges keep the colour, negative edges flip it."""
    color = [0] * (g.n + 1)
    color[1] = 1
    adj = g.neighbors()
    queue = deque([1])
    while queue:
        i = queue.popleft()
        for j, k in adj[i]:
            want = color[i] * g.edges[k].weight.sign
            if color[j] == 0:
                color[j] = want
                queue.append(j)
            elif color[j] != want:
                return None
    if any(c == 0 for c in color[1:]):
        return None
    return Bipartition(tuple(color[1:]))


def _edge_arrays(g: MatrixWeightedGraph):
    eu = np.array([e.u - 1 for e in g.edges], dtype=np.intc)
    ev = np.array([e.v - 1 for e in g.edges], dtype=np.intc)
    eneg = np.array([e.weight.sign < 0 for e in g.edges], dtype=np.uint8)
    edef = np.array([e.weight.definite for e in g.edges], dtype=np.uint8)
    return eu, ev, eneg, edef


def _conflict_pairs(g: MatrixWeightedGraph) -> np.ndarray:
    """Pairs of semi-definite edges whose kernels meet only at zero."""
    semi = [k for k, e in enumerate(g.edges) if not e.weight.definite]
    pairs = []
    for a_pos, a in enumerate(semi):
        for b in semi[a_pos + 1:]:
            both = intersect_nulls([g.edges[a].weight, g.edges[b].weight])
            if both.is_trivial:
                pairs.append((a, b))
    return np.array(pairs, dtype=np.intc).reshape(-1, 2)


def enumerate_nbs(g: MatrixWeightedGraph, backend: str | None = None) -> BalanceReport:
    """Every bipartition whose balancing set has a non-trivial common kernel.

    An exhaustive scan over the 2^(n-1) canonical partitions (compiled or
    numpy backend, see :mod:`mwconsensus.kernels`) discards partitions that
    would put a definite edge, or two edges with independent kernels, in
    the balancing set. Survivors get the exact kernel intersection. Entries
    come back in lexicographic partition order.
    """
    if g.n > MAX_ENUM_NODES:
        raise TooManyNodes(f"n={g.n} exceeds the enumeration cap of {MAX_ENUM_NODES}")
    eu, ev, eneg, edef = _edge_arrays(g)
    candidates = kernels.candidate_partitions(g.n, eu, ev, eneg, edef,
                                              _conflict_pairs(g), backend=backend)
    found = []
    cache: dict[tuple[int, ...], Subspace] = {}
    for k in candidates:
        p = Bipartition.from_index(g.n, int(k))
        members = tuple(_violating_edges(g, p.signs))
        if members not in cache:
            cache[members] = intersect_nulls([g.edges[e].weight for e in members], dim=g.d)
        null = cache[members]
        if null.dimension > 0:
            found.append(BalancingSet(p, members, null))
    return BalanceReport(is_structurally_balanced(g), tuple(found), pn_spanning_tree(g))


def enumerate_nbs_bruteforce(g: MatrixWeightedGraph) -> tuple[BalancingSet, ...]:
    """Reference enumeration without the kernel prefilter."""
    return tuple(b for b in (balancing_set(g, p) for p in canonical_bipartitions(g.n))
                 if b.null.dimension > 0)


def gauge_matrix(p: Bipartition | Sequence[int], d: int) -> np.ndarray:
    signs = p.signs if isinstance(p, Bipartition) else tuple(p)
    return np.kron(np.diag(np.asarray(signs, dtype=float)), np.eye(d))


def gauge_consensus_vector(p: Bipartition, xi) -> np.ndarray:
    """D (1_n kron xi): node i gets sigma_i * xi."""
    xi = np.asarray(xi, dtype=float)
    return np.concatenate([s * xi for s in p.signs])


def gauge_consensus_space(p: Bipartition, s: Subspace) -> Subspace:
    """span{D (1_n kron basis(s))}, orthonormalised."""
    n = p.n
    cols = np.kron(np.asarray(p.signs, dtype=float)[:, None], s.basis) / np.sqrt(n)
    return Subspace(cols)


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def pn_spanning_tree(g: MatrixWeightedGraph) -> tuple[int, ...] | None:
    """Edge indices of a spanning tree made only of definite edges, if one exists."""
    uf = _UnionFind(g.n + 1)
    tree = []
    for k, e in enumerate(g.edges):
        if e.weight.definite and uf.union(e.u, e.v):
            tree.append(k)
    return tuple(tree) if len(tree) == g.n - 1 else None


def walk_nodes(g: MatrixWeightedGraph, path: Sequence[int], start: int | None = None) -> list[int]:
    """Node sequence visited by a walk given as edge indices.

    Without ``start`` the walk begins at the endpoint of the first edge that
    the second edge does not touch.
    """
    if not path:
        raise NotAPath("empty path")
    try:
        edges = [g.edges[k] for k in path]
    except (IndexError, TypeError):
        raise NotAPath(f"path {list(path)} references a missing edge") from None
    first = edges[0]
    if start is None:
        if len(edges) > 1 and first.v not in edges[1].nodes:
            start = first.v
        else:
            start = first.u
    if start not in first.nodes:
        raise NotAPath(f"path does not start at node {start}")
    nodes = [start]
    for e in edges:
        if nodes[-1] not in e.nodes:
            raise NotAPath(f"edge ({e.u},{e.v}) does not continue the walk at node {nodes[-1]}")
        nodes.append(e.other(nodes[-1]))
    return nodes


def path_sign(g: MatrixWeightedGraph, path: Sequence[int]) -> int:
    walk_nodes(g, path)
    sign = 1
    for k in path:
        sign *= g.edges[k].weight.sign
    return sign


def path_null_space(g: MatrixWeightedGraph, path: Sequence[int]) -> Subspace:
    """Span of the kernels of the weights along the path."""
    walk_nodes(g, path)
    return span_sum([g.edges[k].weight.null_basis for k in path])


def merge_check(g: MatrixWeightedGraph, core_nodes, core_division: Bipartition,
                vertex: int, paths: Sequence[Sequence[int]]) -> bool:
    """Sufficient condition for an outside vertex to join a bipartite core.

    ``core_division`` holds the signs of ``sorted(core_nodes)`` in that order.
    Each path is a list of edge indices starting at ``vertex`` whose last node
    (and only that node) lies in the core. The vertex merges when every path
    predicts the same signed copy of the core value and the path kernels
    intersect trivially.
    """
    core = sorted(set(core_nodes))
    if len(core_division.signs) != len(core):
        raise ValueError("core_division must have one sign per core node")
    sigma = dict(zip(core, core_division.signs))
    if vertex in sigma:
        raise VertexInCore(f"vertex {vertex} is already in the core")
    if not paths:
        raise NotAPath("at least one path is required")
    products = set()
    kernels_ = []
    for path in paths:
        nodes = walk_nodes(g, path, start=vertex)
        inner = [i for i in nodes[1:-1] if i in sigma]
        if inner:
            raise PathTouchesCore(f"path {list(path)} passes through core nodes {inner}")
        end = nodes[-1]
        if end not in sigma:
            raise NotAPath(f"path {list(path)} ends at node {end}, outside the core")
        products.add(path_sign(g, path) * sigma[end])
        kernels_.append(path_null_space(g, path))
    return len(products) == 1 and intersect(kernels_).is_trivial
