"""Linear subspaces stored as orthonormal bases.

All kernels are computed with the SVD; singular values at or below
``tol * max(1, sigma_max)`` count as zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_NULL_TOL = 1e-9
DEFAULT_CONTAINS_TOL = 1e-8
_ABS_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of R^ambient_dim spanned by the orthonormal columns of ``basis``."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-D array")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    @property
    def is_trivial(self) -> bool:
        return self.dimension == 0

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim))

    @classmethod
    def span(cls, vectors, tol: float = DEFAULT_NULL_TOL) -> "Subspace":
        """Orthonormal basis for the span of a non-empty sequence of 1-D vectors."""
        cols = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
        return _orth(cols, tol)

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def canonical_basis(self) -> np.ndarray:
        """Basis with each column's first non-negligible entry made positive.

        Only the signs are normalised; used to make serialised output stable.
        """
        b = np.array(self.basis)
        for k in range(b.shape[1]):
            col = b[:, k]
            lead = np.flatnonzero(np.abs(col) > 1e-9)
            if lead.size and col[lead[0]] < 0:
                b[:, k] = -col
        return b

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dimension={self.dimension})"


def _cutoff(s: np.ndarray, tol: float) -> float:
    smax = s[0] if s.size else 0.0
    return max(tol * max(1.0, smax), _ABS_FLOOR)


def _orth(cols: np.ndarray, tol: float = DEFAULT_NULL_TOL) -> Subspace:
    m = cols.shape[0]
    if cols.shape[1] == 0:
        return Subspace.zero(m)
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    rank = int(np.sum(s > _cutoff(s, tol)))
    return Subspace(u[:, :rank])


def null_space(m, tol: float = DEFAULT_NULL_TOL) -> Subspace:
    """Kernel of an m-by-k matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("null_space expects a 2-D matrix")
    rows, cols = m.shape
    if rows == 0:
        return Subspace.full(cols)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > _cutoff(s, tol)))
    return Subspace(vt[rank:].T)


def intersect_nulls(mats: Sequence, dim: int | None = None,
                    tol: float = DEFAULT_NULL_TOL) -> Subspace:
    """Common kernel of several d-by-d matrices (``WeightMatrix`` or arrays).

    The empty family gives all of R^dim, so ``dim`` is required in that case.
    """
    arrays = [np.asarray(getattr(a, "entries", a), dtype=float) for a in mats]
    if not arrays:
        if dim is None:
            raise ValueError("dim is required for an empty family")
        return Subspace.full(dim)
    return null_space(np.vstack(arrays), tol)


def span_sum(subs: Iterable[Subspace], tol: float = DEFAULT_NULL_TOL) -> Subspace:
    """Smallest subspace containing every input."""
    subs = list(subs)
    if not subs:
        raise ValueError("span_sum needs at least one subspace")
    dims = {s.ambient_dim for s in subs}
    if len(dims) != 1:
        raise ValueError("ambient dimensions differ")
    return _orth(np.hstack([s.basis for s in subs]), tol)


def intersect(subs: Iterable[Subspace], tol: float = DEFAULT_NULL_TOL) -> Subspace:
    """Intersection of arbitrary subspaces via their stacked complement projectors."""
    subs = list(subs)
    if not subs:
        raise ValueError("intersect needs at least one subspace")
    n = subs[0].ambient_dim
    if any(s.ambient_dim != n for s in subs):
        raise ValueError("ambient dimensions differ")
    eye = np.eye(n)
    return null_space(np.vstack([eye - s.projector() for s in subs]), tol)


def project(s: Subspace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != s.ambient_dim:
        raise ValueError("dimension mismatch")
    return s.basis @ (s.basis.T @ x)


def contains(s: Subspace, v, tol: float = DEFAULT_CONTAINS_TOL) -> bool:
    v = np.asarray(v, dtype=float)
    if v.shape[0] != s.ambient_dim:
        raise ValueError("dimension mismatch")
    return bool(np.linalg.norm(v - project(s, v)) <= tol * np.linalg.norm(v))


def equals(s1: Subspace, s2: Subspace, tol: float = DEFAULT_CONTAINS_TOL) -> bool:
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if s1.dimension != s2.dimension:
        return False
    return (all(contains(s2, c, tol) for c in s1.basis.T)
            and all(contains(s1, c, tol) for c in s2.basis.T))
