"""Subspaces of C^m stored as orthonormal bases.

Every subspace produced by this module carries an orthonormal basis with
``d`` columns (``d`` may be 0).  Predicates compare subspaces through
projectors and the opening metric, never through the basis itself, since
bases are only defined up to a unitary change of coordinates.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Relative cutoff used when deciding the rank of a spanning set produced by
# chained computations.  Rounding errors from earlier factorizations are of
# order 1e-14, far above m*eps, so the working cutoff sits well above them.
RANK_RTOL = 1e-10

# Two subspaces are considered equal when their opening is at most this.
EQ_TOL = 1e-8


class DimensionError(ValueError):
    """Raised when ambient dimensions do not agree."""


class Subspace:
    """A subspace of C^m represented by an orthonormal basis.

    Construct instances with :func:`span`, :func:`column_span`,
    :meth:`Subspace.zero` or :meth:`Subspace.full`.  The constructor itself
    trusts that ``basis`` has orthonormal columns.
    """

    __array_priority__ = 1000

    def __init__(self, basis: np.ndarray, tol: float = RANK_RTOL):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] == 0:
            raise DimensionError("basis must be a 2-D array with m >= 1 rows")
        self._basis = basis
        self._basis.setflags(write=False)
        self.tol = float(tol)

    @classmethod
    def zero(cls, m: int) -> "Subspace":
        return cls(np.zeros((m, 0), dtype=complex))

    @classmethod
    def full(cls, m: int) -> "Subspace":
        return cls(np.eye(m, dtype=complex))

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def ambient_dim(self) -> int:
        return self._basis.shape[0]

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        B = self._basis
        P = B @ B.conj().T
        P.setflags(write=False)
        return P

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __repr__(self) -> str:
        return f"Subspace(m={self.ambient_dim}, dim={self.dim})"


def _check_same(S: Subspace, T: Subspace) -> None:
    if S.ambient_dim != T.ambient_dim:
        raise DimensionError(
            f"ambient dimensions differ: {S.ambient_dim} vs {T.ambient_dim}")


def orth_columns(M: np.ndarray, rtol: float = RANK_RTOL,
                 scale: float | None = None) -> np.ndarray:
    """Orthonormal basis for the column space of ``M``.

    Singular values at or below ``rtol * max(smax, scale)`` are dropped.
    ``scale`` gives an absolute floor, which matters when every column of
    ``M`` is rounding noise.
    """
    M = np.asarray(M, dtype=complex)
    m, k = M.shape
    if k == 0 or m == 0:
        return np.zeros((m, 0), dtype=complex)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    ref = s[0] if scale is None else max(s[0], scale)
    r = int(np.sum(s > rtol * ref)) if ref > 0 else 0
    return U[:, :r].copy()


def null_columns(M: np.ndarray, rtol: float = RANK_RTOL,
                 scale: float | None = 1.0) -> np.ndarray:
    """Orthonormal basis for the kernel of ``M`` (as columns)."""
    M = np.asarray(M, dtype=complex)
    rows, k = M.shape
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    if rows == 0:
        return np.eye(k, dtype=complex)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    ref = s[0] if scale is None else max(s[0], scale)
    r = int(np.sum(s > rtol * ref)) if ref > 0 else 0
    return Vh[r:].conj().T.copy()


def column_span(M: np.ndarray, tol: float | None = None,
                scale: float | None = None) -> Subspace:
    """Span of the columns of an m x k matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionError("expected a 2-D array of column vectors")
    rtol = RANK_RTOL if tol is None else tol
    return Subspace(orth_columns(M, rtol, scale), rtol)


def span(vectors: Sequence[Sequence[complex]] | Iterable[np.ndarray],
         tol: float | None = None, m: int | None = None) -> Subspace:
    """Span of a list of vectors of common length ``m``.

    ``tol`` is relative to the largest singular value of the stacked
    vectors.  Pass ``m`` when the list may be empty.
    """
    vecs = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vecs:
        if m is None:
            raise DimensionError("empty vector list needs an explicit m")
        return Subspace.zero(m)
    lengths = {len(v) for v in vecs}
    if len(lengths) != 1:
        raise DimensionError(f"mismatched vector lengths: {sorted(lengths)}")
    if m is not None and lengths != {m}:
        raise DimensionError(f"vectors have length {lengths.pop()}, expected {m}")
    if tol is not None and tol < 0:
        raise ValueError("tol must be nonnegative")
    return column_span(np.column_stack(vecs), tol)


def complement(S: Subspace) -> Subspace:
    """Orthogonal complement of S in C^m."""
    m, d = S.ambient_dim, S.dim
    if d == 0:
        return Subspace.full(m)
    if d == m:
        return Subspace.zero(m)
    U, _, _ = np.linalg.svd(S.basis, full_matrices=True)
    return Subspace(U[:, d:].copy(), S.tol)


def sum(S: Subspace, T: Subspace) -> Subspace:  # noqa: A001 - mirrors S + T
    """Subspace sum S + T."""
    _check_same(S, T)
    if S.dim == 0:
        return T
    if T.dim == 0:
        return S
    return column_span(np.hstack([S.basis, T.basis]), scale=1.0)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    """Intersection, computed as the complement of S^perp + T^perp."""
    _check_same(S, T)
    return complement(sum(complement(S), complement(T)))


def projector(S: Subspace) -> np.ndarray:
    return S.projector


def residual_norm(S: Subspace, V: np.ndarray) -> float:
    """Spectral norm of (I - P_S) V."""
    V = np.asarray(V, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    if V.size == 0:
        return 0.0
    R = V - S.basis @ (S.basis.conj().T @ V)
    return float(np.linalg.norm(R, 2))


def contains(S: Subspace, v: np.ndarray, tol: float = EQ_TOL) -> bool:
    """True when ||(I - P)v|| <= tol * ||v||."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape[0] != S.ambient_dim:
        raise DimensionError("vector length does not match the ambient space")
    nv = np.linalg.norm(v)
    if nv == 0:
        return True
    return residual_norm(S, v) <= tol * nv


def inclusion_residual(S: Subspace, T: Subspace) -> float:
    """How far S is from lying inside T: ||(I - P_T) B_S||, 0 when S <= T."""
    _check_same(S, T)
    return residual_norm(T, S.basis)


def leq(S: Subspace, T: Subspace, tol: float = EQ_TOL) -> bool:
    """S is contained in T."""
    return inclusion_residual(S, T) <= tol


def opening(S: Subspace, T: Subspace) -> float:
    """Opening (gap) ||P_S - P_T|| between two subspaces, in [0, 1]."""
    _check_same(S, T)
    if S.dim == 0 and T.dim == 0:
        return 0.0
    val = float(np.linalg.norm(S.projector - T.projector, 2))
    return min(max(val, 0.0), 1.0)


def equal(S: Subspace, T: Subspace, tol: float = EQ_TOL) -> bool:
    return opening(S, T) <= tol


def image(M: np.ndarray, S: Subspace) -> Subspace:
    """The subspace M(S) for an m' x m matrix M."""
    M = np.asarray(M, dtype=complex)
    if M.shape[1] != S.ambient_dim:
        raise DimensionError("matrix does not act on the ambient space")
    if S.dim == 0:
        return Subspace.zero(M.shape[0])
    return column_span(M @ S.basis, scale=1.0)
