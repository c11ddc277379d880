"""Random instances and numeric property checks for the balancing-set theory.

Each ``check_*`` returns True when the property holds on the given input.
``run_suite`` sweeps seeded random instances (trial ``t`` uses ``seed + t``)
and dumps any violating graph as JSON.
"""
from __future__ import annotations

import itertools
import json
import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .balance import (Bipartition, balancing_set, canonical_bipartitions, enumerate_nbs,
                      gauge_consensus_space, gauge_consensus_vector, gauge_matrix,
                      is_structurally_balanced, pn_spanning_tree)
from .errors import BadRank, NoPNTree, NotBalanced
from .graph import (MatrixWeightedGraph, classify_weight, graph_to_dict, laplacian,
                    laplacian_via_incidence)
from .subspace import Subspace, contains, equals, null_space

log = logging.getLogger(__name__)

LEMMA1_TOL = 1e-10
NULL_RESIDUAL_TOL = 1e-8
LEMMA5_TOL = 1e-9
DEFINITE_SHIFT = 0.1


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 5
    d: int = 3
    edge_density: float = 0.4
    semidef_fraction: float = 0.5
    negative_fraction: float = 0.4
    force_pn_tree: bool = False
    force_balanced: bool = False
    seed: int = 0
    # semi-definite weights draw their kernels from a small shared pool, which
    # makes multi-edge balancing sets with a common kernel likely
    shared_kernels: bool = False

    def __post_init__(self):
        if not 2 <= self.n <= 8:
            raise ValueError("n must be in 2..8")
        if not 1 <= self.d <= 4:
            raise ValueError("d must be in 1..4")
        if not 0 < self.edge_density <= 1:
            raise ValueError("edge_density must be in (0, 1]")
        for name in ("semidef_fraction", "negative_fraction"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")


def _definite_weight(rng, d):
    b = rng.normal(size=(d, d))
    return b.T @ b + DEFINITE_SHIFT * np.eye(d)


def _semidefinite_weight(rng, d, pool):
    rank = int(rng.integers(1, d))
    b = rng.normal(size=(rank, d))
    if pool is not None:
        k = pool[int(rng.integers(len(pool)))]
        b = b - np.outer(b @ k, k)
    return b.T @ b


def _weight(rng, d, semidef, negative, pool):
    # d == 1 admits no semi-definite non-zero weight
    semidef = semidef and d > 1
    for _ in range(100):
        w = _semidefinite_weight(rng, d, pool) if semidef else _definite_weight(rng, d)
        wm = classify_weight(-w if negative else w)
        if wm.definite != semidef:
            return wm
    raise RuntimeError("could not draw a weight of the requested class")


def random_graph(cfg: GeneratorConfig) -> MatrixWeightedGraph:
    """Connected random graph, deterministic in ``cfg.seed``.

    A random spanning tree is laid down first (definite edges when
    ``force_pn_tree``), then every other node pair becomes an edge with
    probability ``edge_density``. With ``force_balanced`` the edge signs
    follow a random hidden bipartition; if ``negative_fraction`` is 0 that
    bipartition puts every node on one side.
    """
    rng = np.random.default_rng(cfg.seed)
    n, d = cfg.n, cfg.d
    pool = None
    if cfg.shared_kernels and d > 1:
        pool = [v / np.linalg.norm(v) for v in rng.normal(size=(2, d))]
    if cfg.force_balanced:
        if cfg.negative_fraction > 0:
            hidden = np.concatenate([[1], rng.choice([1, -1], size=n - 1)])
        else:
            hidden = np.ones(n, dtype=int)

    order = rng.permutation(n) + 1
    pairs = []
    for i in range(1, n):
        parent = order[int(rng.integers(i))]
        pairs.append((tuple(sorted((int(order[i]), int(parent)))), True))
    in_tree = {p for p, _ in pairs}
    for u, v in itertools.combinations(range(1, n + 1), 2):
        if (u, v) not in in_tree and rng.random() < cfg.edge_density:
            pairs.append(((u, v), False))

    edges = []
    for (u, v), tree_edge in pairs:
        if cfg.force_balanced:
            negative = hidden[u - 1] != hidden[v - 1]
        else:
            negative = rng.random() < cfg.negative_fraction
        semidef = rng.random() < cfg.semidef_fraction
        if tree_edge and cfg.force_pn_tree:
            semidef = False
        edges.append((u, v, _weight(rng, d, semidef, negative, pool)))
    return MatrixWeightedGraph.from_arrays(n, d, edges)


# --- property checks --------------------------------------------------------

def lemma1_deviation(g: MatrixWeightedGraph) -> float:
    return float(np.max(np.abs(laplacian(g) - laplacian_via_incidence(g)), initial=0.0))


def check_lemma1(g: MatrixWeightedGraph) -> bool:
    """L built from blocks equals H^T blkdiag(|A_k|) H."""
    return lemma1_deviation(g) <= LEMMA1_TOL


def check_lemma3(g: MatrixWeightedGraph) -> bool:
    """On a balanced graph every column of D(1 kron I_d) lies in null(L)."""
    p = is_structurally_balanced(g)
    if p is None:
        raise NotBalanced("graph is not structurally balanced")
    cols = gauge_matrix(p, g.d) @ np.kron(np.ones((g.n, 1)), np.eye(g.d))
    return float(np.max(np.abs(laplacian(g) @ cols))) <= NULL_RESIDUAL_TOL


def gauge_consensus_spaces(g: MatrixWeightedGraph, L=None) -> list[tuple[Bipartition, Subspace]]:
    """For each canonical partition D, the space {v : D(1 kron v) in null(L)}.

    Only partitions with a non-trivial space are returned. The space is the
    kernel of ``(I - P) D (1 kron I_d)`` with P the projector onto a
    numerically computed null(L).
    """
    L = laplacian(g) if L is None else L
    N = null_space(L)
    resid = np.eye(L.shape[0]) - N.projector()
    ones = np.kron(np.ones((g.n, 1)), np.eye(g.d))
    out = []
    for p in canonical_bipartitions(g.n):
        space = null_space(resid @ gauge_matrix(p, g.d) @ ones)
        if space.dimension > 0:
            out.append((p, space))
    return out


def check_theorem1(g: MatrixWeightedGraph) -> bool:
    """Both directions of: NBS with kernel Xi  <=>  D(1 kron Xi) in null(L)."""
    L = laplacian(g)
    report = enumerate_nbs(g)
    for nbs in report.nbs_list:
        for xi in nbs.null.basis.T:
            if np.linalg.norm(L @ gauge_consensus_vector(nbs.partition, xi)) > NULL_RESIDUAL_TOL:
                return False
    for p, space in gauge_consensus_spaces(g, L):
        bset = balancing_set(g, p)
        if not all(contains(bset.null, v) for v in space.basis.T):
            return False
    return True


def check_theorem3(g: MatrixWeightedGraph) -> bool:
    """With a PN spanning tree: unique NBS <=> null(L) = span{D(1 kron null(E^nb))},
    and no NBS => null(L) = {0}."""
    if pn_spanning_tree(g) is None:
        raise NoPNTree("graph has no positive-negative spanning tree")
    N = null_space(laplacian(g))
    report = enumerate_nbs(g)
    matches = any(equals(N, gauge_consensus_space(b.partition, b.null))
                  for b in report.nbs_list)
    if report.nbs_unique != matches:
        return False
    if report.nbs_count == 0 and N.dimension != 0:
        return False
    return True


def is_gauge_consensus(x, n: int, d: int, tol: float = LEMMA5_TOL) -> Bipartition | None:
    """A canonical D with all blocks of D x equal, or None."""
    x = np.asarray(x, dtype=float)
    scale = tol * max(1.0, float(np.linalg.norm(x)))
    for p in canonical_bipartitions(n):
        b = (gauge_matrix(p, d) @ x).reshape(n, d)
        if np.all(np.linalg.norm(b - b[0], axis=1) <= scale):
            return p
    return None


def gauge_combination(vectors, patterns, coeffs) -> np.ndarray:
    """sum_i k_i D_i (1 kron v_i)."""
    return sum(c * gauge_consensus_vector(p, v)
               for v, p, c in zip(vectors, patterns, coeffs))


def distinct_up_to_sign(patterns) -> bool:
    canon = [p.canonical() for p in patterns]
    return len(set(canon)) == len(canon)


def _nonzero_coeffs(rng, r):
    return rng.uniform(0.5, 2.0, r) * rng.choice([-1.0, 1.0], r)


def check_lemma5(n: int, d: int, r: int, seed: int) -> bool:
    """Combinations of gauge-consensus vectors with distinct gauges are not
    themselves gauge-consensus vectors.

    Covers independent ``v_1..v_r`` and the dependent two-vector case
    ``v_2 = k v_1``.
    """
    if not 2 <= r <= d:
        raise ValueError("need 2 <= r <= d")
    if n < 2:
        raise ValueError("need n >= 2")
    if r > 1 << (n - 1):
        raise ValueError(f"only {1 << (n - 1)} gauge patterns exist for n={n}")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        vs = rng.normal(size=(r, d))
        if np.linalg.matrix_rank(vs) == r:
            break
    else:
        raise BadRank("could not sample linearly independent vectors")
    idx = rng.choice(1 << (n - 1), size=r, replace=False)
    flips = rng.choice([1, -1], size=r)
    patterns = [Bipartition.from_index(n, int(k)) if f > 0 else -Bipartition.from_index(n, int(k))
                for k, f in zip(idx, flips)]
    x = gauge_combination(vs, patterns, _nonzero_coeffs(rng, r))
    if is_gauge_consensus(x, n, d) is not None:
        return False
    # dependent case: v2 = k v1
    k = float(rng.uniform(0.5, 2.0) * rng.choice([-1, 1]))
    x = gauge_combination([vs[0], k * vs[0]], patterns[:2], _nonzero_coeffs(rng, 2))
    return is_gauge_consensus(x, n, d) is None


# --- suites -----------------------------------------------------------------

SUITES = ("lemma1", "lemma3", "lemma5", "thm1", "thm3")


@dataclass
class SuiteResult:
    suite: str
    trials: int = 0
    passed: int = 0
    skipped: int = 0
    seconds: float = 0.0
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def _sizes(rng, max_nodes, max_dim, min_nodes=2):
    return int(rng.integers(min_nodes, max_nodes + 1)), int(rng.integers(1, max_dim + 1))


def trial_config(suite: str, seed: int, max_nodes: int, max_dim: int) -> GeneratorConfig:
    """Generator settings for one trial of a graph-based suite."""
    rng = np.random.default_rng([seed, SUITES.index(suite)])
    n, d = _sizes(rng, max_nodes, max_dim)
    base = GeneratorConfig(n=n, d=d, seed=seed,
                           edge_density=float(rng.uniform(0.2, 0.8)),
                           semidef_fraction=float(rng.uniform(0.3, 0.9)),
                           negative_fraction=float(rng.uniform(0.0, 0.6)),
                           shared_kernels=bool(rng.random() < 0.5))
    if suite == "lemma3":
        return replace(base, force_balanced=True)
    if suite == "thm3":
        return replace(base, force_pn_tree=True, force_balanced=bool(rng.random() < 0.25))
    if suite == "thm1":
        return replace(base, force_balanced=bool(rng.random() < 0.2))
    return base


def _dump(g, suite, seed, dump_dir):
    if dump_dir is None:
        return None
    Path(dump_dir).mkdir(parents=True, exist_ok=True)
    path = Path(dump_dir) / f"{suite}_seed{seed}.json"
    path.write_text(json.dumps(graph_to_dict(g), indent=2) + "\n")
    return str(path)


def run_suite(suite: str, trials: int, seed: int = 0, max_nodes: int | None = None,
              max_dim: int | None = None, dump_dir=None) -> SuiteResult:
    default_nodes, default_dim = (6, 3) if suite in ("thm1", "thm3") else (8, 4)
    max_nodes = min(max_nodes or default_nodes, 8)
    max_dim = min(max_dim or default_dim, 4)
    res = SuiteResult(suite)
    start = time.perf_counter()
    for t in range(trials):
        s = seed + t
        res.trials += 1
        if suite == "lemma5":
            ok = _lemma5_trial(s, max_nodes, max_dim)
            if ok is None:
                res.skipped += 1
                continue
            if ok:
                res.passed += 1
            else:
                res.violations.append({"seed": s})
            continue
        g = random_graph(trial_config(suite, s, max_nodes, max_dim))
        ok = {"lemma1": check_lemma1, "lemma3": check_lemma3,
              "thm1": check_theorem1, "thm3": check_theorem3}[suite](g)
        if suite in ("thm1", "thm3"):
            count = enumerate_nbs(g).nbs_count
            key = "nbs=0" if count == 0 else "nbs=1" if count == 1 else "nbs>1"
            res.stats[key] = res.stats.get(key, 0) + 1
        if suite == "lemma1":
            res.stats["max_deviation"] = max(res.stats.get("max_deviation", 0.0),
                                             lemma1_deviation(g))
        if ok:
            res.passed += 1
        else:
            res.violations.append({"seed": s, "dump": _dump(g, suite, s, dump_dir)})
            log.warning("%s violated at seed %d", suite, s)
    res.seconds = time.perf_counter() - start
    return res


def _lemma5_trial(seed, max_nodes, max_dim):
    """Random (n, d, r) with n*d <= 16; None when no admissible size exists."""
    rng = np.random.default_rng([seed, SUITES.index("lemma5")])
    shapes = [(n, d) for n in range(2, max_nodes + 1) for d in range(2, max_dim + 1)
              if n * d <= 16]
    if not shapes:
        return None
    n, d = shapes[int(rng.integers(len(shapes)))]
    r = int(rng.integers(2, min(d, 1 << (n - 1)) + 1))
    return check_lemma5(n, d, r, seed)
