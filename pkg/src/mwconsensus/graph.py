"""Signed matrix-weighted graphs, their Laplacian and signed incidence matrix.

Nodes are labelled 1..n everywhere a user sees them; edges are referred to
by their 0-based position in the input edge list.
"""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.linalg import block_diag

from .errors import (DimensionMismatch, Disconnected, DuplicateEdge, Indefinite,
                     GraphInputError, NodeOutOfRange, NotSymmetric, SelfLoop,
                     ZeroMatrix)
from .subspace import Subspace

DEFAULT_CLASS_TOL = 1e-9
_SYM_TOL = 1e-12


class SignClass(enum.Enum):
    POS_DEF = "PosDef"
    POS_SEMIDEF = "PosSemiDef"
    NEG_DEF = "NegDef"
    NEG_SEMIDEF = "NegSemiDef"

    @property
    def sign(self) -> int:
        return 1 if self in (SignClass.POS_DEF, SignClass.POS_SEMIDEF) else -1

    @property
    def definite(self) -> bool:
        return self in (SignClass.POS_DEF, SignClass.NEG_DEF)


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """A classified d-by-d edge weight.

    Build these with :func:`classify_weight`; the constructor does not check
    that ``sign_class`` or ``null_basis`` agree with ``entries``.
    """

    entries: np.ndarray
    sign_class: SignClass
    null_basis: Subspace

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def sign(self) -> int:
        return self.sign_class.sign

    @property
    def definite(self) -> bool:
        return self.sign_class.definite

    @property
    def abs_entries(self) -> np.ndarray:
        return self.sign * self.entries

    def negated(self) -> "WeightMatrix":
        flipped = {
            SignClass.POS_DEF: SignClass.NEG_DEF,
            SignClass.NEG_DEF: SignClass.POS_DEF,
            SignClass.POS_SEMIDEF: SignClass.NEG_SEMIDEF,
            SignClass.NEG_SEMIDEF: SignClass.POS_SEMIDEF,
        }[self.sign_class]
        return WeightMatrix(-self.entries, flipped, self.null_basis)

    def __repr__(self):
        return f"WeightMatrix({self.sign_class.value}, null_dim={self.null_basis.dimension})"


def classify_weight(m, tol: float = DEFAULT_CLASS_TOL) -> WeightMatrix:
    """Classify a symmetric matrix as positive/negative (semi-)definite.

    Parameters
    ----------
    m : array_like, shape (d, d)
    tol : float
        Relative eigenvalue threshold; eigenvalues within
        ``tol * max(1, max|m|)`` of zero are treated as zero.

    Returns
    -------
    WeightMatrix
        The kernel basis comes from the same eigendecomposition, so the
        Def/SemiDef label and the null dimension always agree.

    Raises
    ------
    NotSymmetric, ZeroMatrix, Indefinite
    """
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"weight must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise GraphInputError("weight has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    if np.max(np.abs(m - m.T), initial=0.0) > _SYM_TOL * scale:
        raise NotSymmetric("weight matrix is not symmetric")
    m = 0.5 * (m + m.T)
    eps = tol * scale
    lam, vec = np.linalg.eigh(m)
    lo, hi = lam[0], lam[-1]
    if np.all(np.abs(lam) <= eps):
        raise ZeroMatrix("weight matrix is numerically zero")
    if lo < -eps and hi > eps:
        raise Indefinite(f"weight matrix is indefinite (eigenvalues {lo:.3g}, {hi:.3g})")
    kernel = Subspace(vec[:, np.abs(lam) <= eps])
    if hi > eps:
        cls = SignClass.POS_DEF if lo > eps else SignClass.POS_SEMIDEF
    else:
        cls = SignClass.NEG_DEF if hi < -eps else SignClass.NEG_SEMIDEF
    m.setflags(write=False)
    return WeightMatrix(m, cls, kernel)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: WeightMatrix

    @property
    def nodes(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, node: int) -> int:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise ValueError(f"node {node} is not an endpoint of edge ({self.u},{self.v})")


@dataclass(frozen=True)
class MatrixWeightedGraph:
    n: int
    d: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_arrays(cls, n: int, d: int, edges: Iterable[tuple[int, int, object]],
                    tol: float = DEFAULT_CLASS_TOL, validate: bool = True):
        """Build a graph from ``(u, v, matrix)`` triples with 1-based nodes."""
        built = []
        for k, (u, v, w) in enumerate(edges):
            try:
                wm = w if isinstance(w, WeightMatrix) else classify_weight(w, tol)
            except GraphInputError as exc:
                raise type(exc)(f"edge {k} ({u},{v}): {exc}") from None
            built.append(Edge(int(u), int(v), wm))
        g = cls(int(n), int(d), tuple(built))
        if validate:
            validate_graph(g)
        return g

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[tuple[int, int]]]:
        """Adjacency lists indexed by node label; entries are (neighbor, edge index)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n + 1)]
        for k, e in enumerate(self.edges):
            adj[e.u].append((e.v, k))
            adj[e.v].append((e.u, k))
        return adj

    def with_weight(self, k: int, w) -> "MatrixWeightedGraph":
        """Copy of the graph with edge ``k`` re-weighted."""
        wm = w if isinstance(w, WeightMatrix) else classify_weight(w)
        edges = list(self.edges)
        edges[k] = Edge(edges[k].u, edges[k].v, wm)
        return MatrixWeightedGraph(self.n, self.d, tuple(edges))

    def edge_index(self, u: int, v: int) -> int:
        for k, e in enumerate(self.edges):
            if {e.u, e.v} == {u, v}:
                return k
        raise KeyError(f"no edge ({u},{v})")


def validate_graph(g: MatrixWeightedGraph) -> None:
    if g.n < 1 or g.d < 1:
        raise GraphInputError("graph needs n >= 1 and d >= 1")
    seen = set()
    for k, e in enumerate(g.edges):
        where = f"edge {k} ({e.u},{e.v})"
        if not (1 <= e.u <= g.n and 1 <= e.v <= g.n):
            raise NodeOutOfRange(f"{where}: node outside 1..{g.n}")
        if e.u == e.v:
            raise SelfLoop(f"{where}: self-loop")
        key = frozenset((e.u, e.v))
        if key in seen:
            raise DuplicateEdge(f"{where}: duplicate edge")
        seen.add(key)
        if e.weight.dim != g.d:
            raise DimensionMismatch(f"{where}: weight is {e.weight.dim}x{e.weight.dim}, "
                                    f"graph dimension is {g.d}")
    adj = g.neighbors()
    reached = {1}
    queue = deque([1])
    while queue:
        i = queue.popleft()
        for j, _ in adj[i]:
            if j not in reached:
                reached.add(j)
                queue.append(j)
    if len(reached) != g.n:
        missing = sorted(set(range(1, g.n + 1)) - reached)
        raise Disconnected(f"nodes {missing} are unreachable from node 1")


def laplacian(g: MatrixWeightedGraph) -> np.ndarray:
    """L = C - A with C = blkdiag(sum_j |A_ij|)."""
    d = g.d
    L = np.zeros((g.n * d, g.n * d))
    for e in g.edges:
        i, j = (e.u - 1) * d, (e.v - 1) * d
        a = e.weight.abs_entries
        L[i:i + d, i:i + d] += a
        L[j:j + d, j:j + d] += a
        L[i:i + d, j:j + d] -= e.weight.entries
        L[j:j + d, i:i + d] -= e.weight.entries
    return L


def signed_incidence(g: MatrixWeightedGraph) -> np.ndarray:
    d = g.d
    eye = np.eye(d)
    H = np.zeros((g.num_edges * d, g.n * d))
    for k, e in enumerate(g.edges):
        r = k * d
        H[r:r + d, (e.u - 1) * d:e.u * d] = eye
        H[r:r + d, (e.v - 1) * d:e.v * d] = -e.weight.sign * eye
    return H


def laplacian_via_incidence(g: MatrixWeightedGraph) -> np.ndarray:
    H = signed_incidence(g)
    if not g.edges:
        return np.zeros((g.n * g.d, g.n * g.d))
    W = block_diag(*[e.weight.abs_entries for e in g.edges])
    return H.T @ W @ H


# --- JSON I/O --------------------------------------------------------------

def graph_from_dict(doc: dict, tol: float = DEFAULT_CLASS_TOL) -> MatrixWeightedGraph:
    try:
        n = int(doc["nodes"])
        d = int(doc["dimension"])
        raw = doc["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphInputError(f"malformed graph document: {exc}") from None
    triples = []
    for k, e in enumerate(raw):
        try:
            w = np.asarray(e["weight"], dtype=float)
            triples.append((int(e["u"]), int(e["v"]), w))
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphInputError(f"edge {k}: malformed entry ({exc})") from None
        if w.shape != (d, d):
            raise DimensionMismatch(f"edge {k} ({e['u']},{e['v']}): weight has shape "
                                    f"{w.shape}, expected ({d}, {d})")
    return MatrixWeightedGraph.from_arrays(n, d, triples, tol=tol)


def graph_to_dict(g: MatrixWeightedGraph) -> dict:
    return {
        "nodes": g.n,
        "dimension": g.d,
        "edges": [{"u": e.u, "v": e.v, "weight": e.weight.entries.tolist()}
                  for e in g.edges],
    }


def load_graph(path) -> MatrixWeightedGraph:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"{path}: invalid JSON ({exc})") from None
    return graph_from_dict(doc)


def dump_graph(g: MatrixWeightedGraph, path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(g), indent=2) + "\n")


def graphs_equal(a: MatrixWeightedGraph, b: MatrixWeightedGraph) -> bool:
    if (a.n, a.d, a.num_edges) != (b.n, b.d, b.num_edges):
        return False
    return all(ea.nodes == eb.nodes and np.array_equal(ea.weight.entries, eb.weight.entries)
               for ea, eb in zip(a.edges, b.edges))

