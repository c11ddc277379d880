"""Consensus dynamics x' = -L x: simulation, exact limit and classification."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .balance import (Bipartition, BalanceReport, enumerate_nbs, gauge_consensus_space,
                      gauge_consensus_vector)
from .errors import NonFiniteState
from .graph import MatrixWeightedGraph, laplacian
from .subspace import Subspace, null_space, project

CONVERGENCE_TOL = 1e-6
CLASSIFY_TOL = 1e-5
MAX_SAMPLES = 2000
SETTLE_FACTOR = 40.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (samples, n*d)
    residual: float
    converged: bool
    dt: float
    steps: int

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True, eq=False)
class SteadyStateClass:
    """Outcome of the dynamics.

    ``kind`` is one of ``"trivial"``, ``"consensus"``, ``"bipartite"`` and
    ``"clustered"``. For the bipartite case node i converges to
    ``partition.signs[i-1] * value``; the partition is canonical, so
    ``value`` is node 1's limit.
    """

    kind: str
    value: np.ndarray | None = None
    partition: Bipartition | None = None


@dataclass(frozen=True, eq=False)
class Prediction:
    """What the balancing-set analysis predicts for the steady state.

    ``predicted_class`` is ``"bipartite"``, ``"trivial"``, ``"no-bipartite"``
    or ``"indeterminate"``; ``reason`` is one of ``UniqueNBS``, ``NoNBS``,
    ``MultipleNBS`` and ``NoPNTree``.
    """

    predicted_class: str
    reason: str
    report: BalanceReport
    partition: Bipartition | None = None
    subspace: Subspace | None = None
    containment_residual: float | None = None

    @property
    def containment_holds(self) -> bool | None:
        if self.containment_residual is None:
            return None
        return self.containment_residual <= 1e-8


def spectrum(L: np.ndarray):
    """(lambda_max, smallest eigenvalue above the null-space cutoff or None)."""
    lam = np.linalg.eigvalsh(L)
    lmax = float(lam[-1])
    cutoff = 1e-9 * max(1.0, lmax)
    positive = lam[lam > cutoff]
    return lmax, (float(positive[0]) if positive.size else None)


def settle_time(g: MatrixWeightedGraph) -> float:
    """40 / lambda_2+, long enough for the slowest decaying mode to vanish."""
    _, lam2 = spectrum(laplacian(g))
    if lam2 is None:
        return 1.0
    return SETTLE_FACTOR / lam2


def simulate(g: MatrixWeightedGraph, x0, t_final: float | str = "auto",
             dt: float | str = "auto") -> Trajectory:
    """Integrate x' = -L x with classical fixed-step RK4.

    Because the system is linear, one RK4 step is the matrix polynomial
    ``I - hL + (hL)^2/2 - (hL)^3/6 + (hL)^4/24``, which is formed once and
    applied at every step. The automatic step is
    ``min(0.5 / lambda_max, t_final / 1000)``; the step count is rounded up
    so the last step lands exactly on ``t_final``.
    """
    L = laplacian(g)
    x = np.array(x0, dtype=float)
    if x.shape != (g.n * g.d,):
        raise ValueError(f"x0 must have length {g.n * g.d}")
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 has non-finite entries")
    lmax, lam2 = spectrum(L)
    if t_final == "auto":
        t_final = SETTLE_FACTOR / lam2 if lam2 else 1.0
    t_final = float(t_final)
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if dt == "auto":
        dt = min(0.5 / lmax, t_final / 1000.0) if lmax > 0 else t_final / 1000.0
    steps = max(1, math.ceil(t_final / float(dt) - 1e-9))
    h = t_final / steps

    hL = h * L
    eye = np.eye(L.shape[0])
    step = eye - hL @ (eye - hL @ (eye / 2 - hL @ (eye / 6 - hL / 24)))

    # between recorded samples the same step is applied ``stride`` times, so
    # its matrix power (binary squaring) replaces the inner loop; this keeps
    # stiff graphs with tiny lambda_2 tractable
    stride = max(1, math.ceil(steps / MAX_SAMPLES))
    jump = np.linalg.matrix_power(step, stride)
    times = [0.0]
    states = [x.copy()]
    k = 0
    while k < steps:
        take = min(stride, steps - k)
        x = (jump if take == stride else np.linalg.matrix_power(step, take)) @ x
        k += take
        if not np.all(np.isfinite(x)):
            raise NonFiniteState(f"state diverged at t={k * h:.6g}")
        times.append(k * h)
        states.append(x.copy())
    residual = float(np.linalg.norm(L @ x))
    scale = max(1.0, float(np.linalg.norm(x0)))
    return Trajectory(np.array(times), np.array(states), residual,
                      residual <= CONVERGENCE_TOL * scale, h, steps)


def lyapunov_values(g: MatrixWeightedGraph, traj: Trajectory) -> np.ndarray:
    L = laplacian(g)
    return np.einsum("ti,ij,tj->t", traj.states, L, traj.states)


def steady_state_exact(g: MatrixWeightedGraph, x0) -> np.ndarray:
    """lim exp(-Lt) x0, the orthogonal projection of x0 onto null(L)."""
    return project(null_space(laplacian(g)), np.asarray(x0, dtype=float))


def classify_steady_state(xbar, d: int, tol: float = CLASSIFY_TOL) -> SteadyStateClass:
    xs = np.asarray(xbar, dtype=float).reshape(-1, d)
    norms = np.linalg.norm(xs, axis=1)
    if np.all(norms <= tol):
        return SteadyStateClass("trivial")
    v = xs[0]
    if norms[0] > tol:
        slack = tol * max(1.0, float(np.linalg.norm(v)))
        if np.all(np.linalg.norm(xs - v, axis=1) <= slack):
            return SteadyStateClass("consensus", value=v.copy())
        plus = np.linalg.norm(xs - v, axis=1)
        minus = np.linalg.norm(xs + v, axis=1)
        if np.all(np.minimum(plus, minus) <= slack):
            signs = tuple(1 if p <= m else -1 for p, m in zip(plus, minus))
            if -1 in signs:
                return SteadyStateClass("bipartite", value=v.copy(),
                                        partition=Bipartition(signs))
    return SteadyStateClass("clustered")


def random_initial_state(g: MatrixWeightedGraph, seed: int) -> np.ndarray:
    """Uniform on [-2, 2] per coordinate."""
    return np.random.default_rng(seed).uniform(-2.0, 2.0, g.n * g.d)


def predict_from_nbs(g: MatrixWeightedGraph, report: BalanceReport | None = None) -> Prediction:
    """Predict the steady-state class from the NBS count and PN spanning tree.

    With a PN spanning tree a unique NBS means bipartite consensus on
    span{D(1 kron null(E^nb))}, and no NBS means everything decays to zero.
    More than one NBS rules bipartite consensus out for any graph. Without
    the tree a unique NBS is necessary but not sufficient, so the answer is
    ``"indeterminate"``; the containment D(1 kron null(E^nb)) in null(L) is
    still checked and reported.
    """
    report = report or enumerate_nbs(g)
    has_tree = report.pn_spanning_tree is not None
    if report.nbs_count > 1:
        return Prediction("no-bipartite", "MultipleNBS", report)
    if report.nbs_count == 0:
        return Prediction("trivial" if has_tree else "no-bipartite", "NoNBS", report)
    nbs = report.nbs_list[0]
    space = gauge_consensus_space(nbs.partition, nbs.null)
    L = laplacian(g)
    resid = max(float(np.linalg.norm(L @ gauge_consensus_vector(nbs.partition, xi)))
                for xi in nbs.null.basis.T)
    if has_tree:
        return Prediction("bipartite", "UniqueNBS", report, nbs.partition, space, resid)
    return Prediction("indeterminate", "NoPNTree", report, nbs.partition, space, resid)


def write_trajectory_csv(traj: Trajectory, n: int, d: int, path) -> None:
    header = ["t"] + [f"x{i}_{k}" for i in range(1, n + 1) for k in range(1, d + 1)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, x in zip(traj.times, traj.states):
            w.writerow([f"{t:.12g}"] + [f"{v:.12g}" for v in x])
