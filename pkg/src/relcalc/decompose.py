"""Decompositions of a relation into operator-like and multivalued pieces.

Notation used throughout: ``H_A`` is the orthogonal complement of
``mul A**`` and ``P`` the orthogonal projection onto it.  In finite
dimension ``A** = A``, but ``A**`` is still computed explicitly so that
rounding drift shows up in the residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import relation as rel
from . import subspace as ss
from .relation import Relation
from .subspace import EQ_TOL, Subspace


class DecompositionError(ValueError):
    """A decomposition does not exist; ``witness`` shows why."""

    def __init__(self, message: str, witness: np.ndarray):
        super().__init__(message)
        self.witness = witness


class NotOrthogonal(DecompositionError):
    pass


class NotFormallyDomainTight(DecompositionError):
    pass


@dataclass
class Decomposition:
    """Parts of a decomposition together with the checked identity."""

    kind: str
    parts: list[Relation]
    identity_residual: float
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.identity_residual <= EQ_TOL and all(
            v <= EQ_TOL for k, v in self.extra.items() if k.endswith("residual"))


def double_adjoint(A: Relation) -> Relation:
    return rel.adjoint(rel.adjoint(A))


def hilbert_part(A: Relation) -> Subspace:
    """H_A = (mul A**)^perp."""
    return ss.complement(double_adjoint(A).mul)


def regular_projection(A: Relation) -> np.ndarray:
    """Orthogonal projection P onto H_A."""
    return hilbert_part(A).projector


def regular_part(A: Relation) -> Relation:
    """A_reg = P A."""
    return rel.product(rel.from_operator(regular_projection(A)), A)


def singular_part(A: Relation) -> Relation:
    """A_sing = (I - P) A."""
    P = regular_projection(A)
    return rel.product(rel.from_operator(np.eye(A.n) - P), A)


def operator_part(A: Relation) -> Relation:
    """A_op = A intersected with C^n x H_A."""
    return rel.restrict_range(A, hilbert_part(A))


def mul_part(A: Relation) -> Relation:
    """A_mul = {0} x mul A."""
    return rel.cross(Subspace.zero(A.n), A.mul)


def max_operator_part(A: Relation) -> Relation:
    """A_m = P_m A with P_m the projection onto (mul A)^perp."""
    Pm = ss.complement(A.mul).projector
    return rel.product(rel.from_operator(Pm), A)


def canonical(A: Relation) -> Decomposition:
    """A = A_reg + A_sing (operatorwise)."""
    reg, sing = regular_part(A), singular_part(A)
    res = rel.opening(rel.op_sum(reg, sing), A)
    return Decomposition("canonical", [reg, sing], res)


def componentwise(A: Relation) -> Decomposition:
    """A = A_op +^ A_mul."""
    op, mp = operator_part(A), mul_part(A)
    res = rel.opening(rel.cw_sum(op, mp), A)
    return Decomposition("componentwise", [op, mp], res)


def maximal_part(A: Relation) -> Decomposition:
    """A = A_m +^ A_mul."""
    am, mp = max_operator_part(A), mul_part(A)
    res = rel.opening(rel.cw_sum(am, mp), A)
    return Decomposition("maximal-part", [am, mp], res)


def is_decomposable(A: Relation):
    """Check ran (I - P)A within mul A.

    Returns ``(True, Decomposition)`` or ``(False, witness)`` where the
    witness is a vector of ran (I - P)A outside mul A.
    """
    sing = singular_part(A)
    R = sing.ran
    mul = A.mul
    if ss.leq(R, mul):
        return True, componentwise(A)
    resid = R.basis - mul.projector @ R.basis
    j = int(np.argmax(np.linalg.norm(resid, axis=0)))
    return False, R.basis[:, j].copy()


def _overlap_witness(S: Subspace, T: Subspace) -> np.ndarray:
    """A vector of S with the largest component along T."""
    M = S.basis.conj().T @ T.basis
    U, _, _ = np.linalg.svd(M)
    return S.basis @ U[:, 0]


def orthogonal_decompose(A: Relation) -> Decomposition:
    """A = A_op (+) A_mul with respect to C^n = H_A (+) mul A**.

    Exists exactly when mul A lies in mul A*, which in finite dimension
    means dom A is orthogonal to mul A.  Raises :class:`NotOrthogonal`
    otherwise, carrying a vector of dom A that is not orthogonal to mul A.
    """
    star = rel.adjoint(A)
    if not ss.leq(A.mul, star.mul):
        w = _overlap_witness(A.dom, A.mul)
        raise NotOrthogonal("dom A is not orthogonal to mul A", w)
    H = hilbert_part(A)
    dec = componentwise(A)
    op = dec.parts[0]
    dec.kind = "orthogonal"
    dec.extra["splitting"] = (H, double_adjoint(A).mul)
    dec.extra["dom_residual"] = ss.inclusion_residual(op.dom, H)
    dec.extra["ran_residual"] = ss.inclusion_residual(op.ran, H)
    return dec


def adjoint_decompose(A: Relation) -> Decomposition:
    """Componentwise decomposition of A*.

    ``extra["orthogonal"]`` records whether it is orthogonal, which happens
    exactly when mul A* lies in mul A**.
    """
    star = rel.adjoint(A)
    dec = componentwise(star)
    dec.kind = "adjoint-componentwise"
    dec.extra["orthogonal"] = ss.leq(star.mul, double_adjoint(A).mul)
    return dec


def real_part(A: Relation) -> Relation:
    """Re A = (A + A*) / 2."""
    return rel.scalar_mul(0.5, rel.op_sum(A, rel.adjoint(A)))


def imag_part(A: Relation) -> Relation:
    """Im A = (A - A*) / 2i."""
    return rel.scalar_mul(1 / 2j, rel.op_diff(A, rel.adjoint(A)))


def cartesian_components(A: Relation) -> Decomposition:
    """Symmetric A1, A2 with A = A1 + i A2.

    A1 = (A + (A*)_op) / 2 and A2 = (A - (A*)_op) / 2i.  Requires
    dom A within dom A*; raises :class:`NotFormallyDomainTight` otherwise.
    """
    star = rel.adjoint(A)
    if not ss.leq(A.dom, star.dom):
        resid = A.dom.basis - star.dom.projector @ A.dom.basis
        j = int(np.argmax(np.linalg.norm(resid, axis=0)))
        raise NotFormallyDomainTight("dom A is not contained in dom A*",
                                     A.dom.basis[:, j].copy())
    star_op = operator_part(star)
    a1 = rel.scalar_mul(0.5, rel.op_sum(A, star_op))
    a2 = rel.scalar_mul(1 / 2j, rel.op_diff(A, star_op))
    back = rel.op_sum(a1, rel.scalar_mul(1j, a2))
    res = rel.opening(back, A)
    ext = rel.op_sum(real_part(A), rel.scalar_mul(1j, imag_part(A)))
    dec = Decomposition("cartesian", [a1, a2], res)
    dec.extra["infinity_residual"] = rel.opening(rel.infinity_ext(A), ext)
    return dec
