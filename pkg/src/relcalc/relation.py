"""Linear relations in C^n and their algebra.

A relation is a subspace of C^n x C^n, stored through its graph in C^{2n}.
The first ``n`` coordinates hold ``f`` and the last ``n`` hold ``f'``, so an
orthonormal graph basis splits into the blocks ``F`` (top) and ``G``
(bottom).  All results are built by subspace arithmetic on these blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from . import subspace as ss
from .subspace import EQ_TOL, DimensionError, Subspace


class Relation:
    """A linear relation in C^n, held as its graph subspace of C^{2n}."""

    def __init__(self, graph: Subspace):
        if graph.ambient_dim % 2:
            raise DimensionError("graph must live in an even-dimensional space")
        self.graph = graph
        self.n = graph.ambient_dim // 2

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def basis(self) -> np.ndarray:
        return self.graph.basis

    @property
    def F(self) -> np.ndarray:
        return self.graph.basis[: self.n]

    @property
    def G(self) -> np.ndarray:
        return self.graph.basis[self.n:]

    @cached_property
    def _ker_F(self) -> np.ndarray:
        return ss.null_columns(self.F)

    @cached_property
    def dom(self) -> Subspace:
        return ss.column_span(self.F, scale=1.0)

    @cached_property
    def ran(self) -> Subspace:
        return ss.column_span(self.G, scale=1.0)

    @cached_property
    def mul(self) -> Subspace:
        K = self._ker_F
        if K.shape[1] == 0:
            return Subspace.zero(self.n)
        return ss.column_span(self.G @ K, scale=1.0)

    @cached_property
    def ker(self) -> Subspace:
        K = ss.null_columns(self.G)
        if K.shape[1] == 0:
            return Subspace.zero(self.n)
        return ss.column_span(self.F @ K, scale=1.0)

    def is_operator(self) -> bool:
        return self.mul.dim == 0

    def __repr__(self) -> str:
        return (f"Relation(n={self.n}, dim={self.dim}, dom={self.dom.dim}, "
                f"mul={self.mul.dim})")


@dataclass(frozen=True)
class ElementPair:
    """An element {f, f'} of a relation."""

    f: np.ndarray
    f_prime: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.f, self.f_prime])


class Components(NamedTuple):
    dom: Subspace
    ran: Subspace
    ker: Subspace
    mul: Subspace


def _same_n(A: Relation, B: Relation) -> None:
    if A.n != B.n:
        raise DimensionError(f"relations act in C^{A.n} and C^{B.n}")


def _from_cols(F: np.ndarray, G: np.ndarray) -> Relation:
    """Relation spanned by the columns of [F; G]."""
    return Relation(ss.column_span(np.vstack([F, G]), scale=1.0))


# -- constructors -----------------------------------------------------------

def from_graph(vectors: Sequence[Sequence[complex]], n: int | None = None,
               tol: float | None = None) -> Relation:
    """Relation spanned by the given 2n-vectors (f stacked over f')."""
    m = None if n is None else 2 * n
    return Relation(ss.span(vectors, tol=tol, m=m))


def from_operator(M: np.ndarray, domain: Subspace | None = None) -> Relation:
    """Graph {(f, M f) : f in domain} of an n x n matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError("operator must be a square matrix")
    n = M.shape[0]
    if domain is None:
        domain = Subspace.full(n)
    if domain.ambient_dim != n:
        raise DimensionError("domain does not match the matrix size")
    D = domain.basis
    return _from_cols(D, M @ D)


def zero_relation(n: int) -> Relation:
    """The relation {0} x {0}."""
    return Relation(Subspace.zero(2 * n))


def full_relation(n: int) -> Relation:
    return Relation(Subspace.full(2 * n))


def cross(S: Subspace, T: Subspace) -> Relation:
    """The product relation S x T."""
    ss._check_same(S, T)
    n = S.ambient_dim
    B = np.zeros((2 * n, S.dim + T.dim), dtype=complex)
    B[:n, : S.dim] = S.basis
    B[n:, S.dim:] = T.basis
    return Relation(Subspace(B))


def identity_on(S: Subspace) -> Relation:
    B = np.vstack([S.basis, S.basis]) / np.sqrt(2.0)
    return Relation(Subspace(B))


def zero_on(S: Subspace) -> Relation:
    return Relation(Subspace(np.vstack([S.basis, np.zeros_like(S.basis)])))


def scalar_operator(c: complex, n: int) -> Relation:
    return from_operator(c * np.eye(n))


# -- basic algebra ------------------------------------------------------------

def components(A: Relation) -> Components:
    return Components(A.dom, A.ran, A.ker, A.mul)


def inverse(A: Relation) -> Relation:
    return Relation(Subspace(np.vstack([A.G, A.F]), A.graph.tol))


def adjoint(A: Relation) -> Relation:
    """A* = J(A^perp) with J(f, f') = (f', -f)."""
    N = ss.complement(A.graph).basis
    n = A.n
    return Relation(Subspace(np.vstack([N[n:], -N[:n]]), A.graph.tol))


def intersect(A: Relation, B: Relation) -> Relation:
    _same_n(A, B)
    return Relation(ss.intersect(A.graph, B.graph))


def cw_sum(A: Relation, B: Relation) -> Relation:
    """Componentwise sum: the subspace sum of the two graphs."""
    _same_n(A, B)
    return Relation(ss.sum(A.graph, B.graph))


def op_sum(A: Relation, B: Relation) -> Relation:
    """Operatorwise sum {(f, f' + f'') : (f, f') in A, (f, f'') in B}."""
    _same_n(A, B)
    n = A.n
    dA = A.dim
    if dA == 0:
        return cross(Subspace.zero(n), B.mul)
    if B.dim == 0:
        return cross(Subspace.zero(n), A.mul)
    K = ss.null_columns(np.hstack([A.F, -B.F]))
    if K.shape[1] == 0:
        return zero_relation(n)
    Z, W = K[:dA], K[dA:]
    return _from_cols(A.F @ Z, A.G @ Z + B.G @ W)


def scalar_mul(c: complex, A: Relation) -> Relation:
    """c A = {(f, c f') : (f, f') in A}."""
    return _from_cols(A.F, c * A.G)


def op_diff(A: Relation, B: Relation) -> Relation:
    return op_sum(A, scalar_mul(-1.0, B))


def shift(A: Relation, lam: complex) -> Relation:
    """A - lam, built as an operatorwise sum with -lam I."""
    return op_sum(A, scalar_operator(-lam, A.n))


def product(A: Relation, B: Relation) -> Relation:
    """AB = {(f, f') : (f, h) in B and (h, f') in A for some h}."""
    _same_n(A, B)
    n = A.n
    dB = B.dim
    if dB == 0:
        return cross(Subspace.zero(n), A.mul)
    if A.dim == 0:
        return cross(B.ker, Subspace.zero(n))
    K = ss.null_columns(np.hstack([B.G, -A.F]))
    if K.shape[1] == 0:
        return zero_relation(n)
    Z, W = K[:dB], K[dB:]
    return _from_cols(B.F @ Z, A.G @ W)


def cw_orth_sum(A: Relation, B: Relation) -> Relation:
    """Componentwise orthogonal sum, acting in C^{n1} + C^{n2}."""
    n1, n2 = A.n, B.n
    n = n1 + n2
    M = np.zeros((2 * n, A.dim + B.dim), dtype=complex)
    M[:n1, : A.dim] = A.F
    M[n: n + n1, : A.dim] = A.G
    M[n1:n, A.dim:] = B.F
    M[n + n1:, A.dim:] = B.G
    return Relation(Subspace(M))


def infinity_ext(A: Relation) -> Relation:
    """A +^ ({0} x mul A*)."""
    n = A.n
    return cw_sum(A, cross(Subspace.zero(n), adjoint(A).mul))


def restrict_range(A: Relation, S: Subspace) -> Relation:
    """A intersected with C^n x S."""
    n = A.n
    if S.ambient_dim != n:
        raise DimensionError("range restriction subspace has wrong size")
    return intersect(A, cross(Subspace.full(n), S))


def _check_isometry(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[0] < V.shape[1]:
        raise DimensionError("embedding must be an m x n matrix with m >= n")
    if np.linalg.norm(V.conj().T @ V - np.eye(V.shape[1]), 2) > tol:
        raise ValueError("embedding matrix is not an isometry")
    return V


def embed(A: Relation, V: np.ndarray) -> Relation:
    """Image of A under (f, f') -> (V f, V f') for an isometry V."""
    V = _check_isometry(V)
    if V.shape[1] != A.n:
        raise DimensionError("embedding does not match the relation")
    return Relation(Subspace(np.vstack([V @ A.F, V @ A.G])))


def compress(A: Relation, V: np.ndarray, tol: float = EQ_TOL) -> Relation:
    """Inverse of :func:`embed` for a relation living in ran V x ran V."""
    V = _check_isometry(V)
    if V.shape[0] != A.n:
        raise DimensionError("isometry does not match the relation")
    Vh = V.conj().T
    F, G = Vh @ A.F, Vh @ A.G
    lost = np.linalg.norm(A.F - V @ F, 2) if A.dim else 0.0
    lost = max(lost, np.linalg.norm(A.G - V @ G, 2) if A.dim else 0.0)
    if lost > tol:
        raise ValueError(f"relation is not contained in the subspace ({lost:.3g})")
    return _from_cols(F, G)


# -- comparisons ----------------------------------------------------------------

def opening(A: Relation, B: Relation) -> float:
    _same_n(A, B)
    return ss.opening(A.graph, B.graph)


def equal(A: Relation, B: Relation, tol: float = EQ_TOL) -> bool:
    return opening(A, B) <= tol


def inclusion_residual(A: Relation, B: Relation) -> float:
    _same_n(A, B)
    return ss.inclusion_residual(A.graph, B.graph)


def leq(A: Relation, B: Relation, tol: float = EQ_TOL) -> bool:
    return inclusion_residual(A, B) <= tol


def contains(A: Relation, f, f_prime, tol: float = EQ_TOL) -> bool:
    v = np.concatenate([np.asarray(f, dtype=complex).ravel(),
                        np.asarray(f_prime, dtype=complex).ravel()])
    return ss.contains(A.graph, v, tol)


def element(A: Relation, z: np.ndarray) -> ElementPair:
    """The element of A with graph coordinates z."""
    z = np.asarray(z, dtype=complex).ravel()
    return ElementPair(A.F @ z, A.G @ z)


def operator_matrix(A: Relation) -> np.ndarray:
    """An n x n matrix T with T f = f' on dom A, zero on (dom A)^perp.

    Only meaningful when A is an operator.
    """
    if A.dim == 0:
        return np.zeros((A.n, A.n), dtype=complex)
    return A.G @ np.linalg.pinv(A.F, rcond=ss.RANK_RTOL)
