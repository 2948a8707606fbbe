"""Membership tests for the standard classes of relations.

Form-based classes are decided exactly from the value form: for graph
coordinates ``z`` the element ``(Fz, Gz)`` has value ``(f', f) = z^H C z``
with ``C = F^H G``.  A scalar inequality on the value holds for every
element iff a Hermitian matrix built from ``C`` is positive semidefinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import decompose as dec
from . import relation as rel
from . import subspace as ss
from .relation import Relation

PSD_RTOL = 1e-10
HERM_TOL = 1e-9


class ClassMismatch(ValueError):
    """The relation is not in the class a maximality test was asked about."""


class NotAnExtension(ValueError):
    """The embedded relation is not contained in the candidate extension."""


@dataclass(frozen=True)
class FormPair:
    cross: np.ndarray
    gram: np.ndarray

    @property
    def hermitian(self) -> np.ndarray:
        return (self.cross + self.cross.conj().T) / 2

    @property
    def skew(self) -> np.ndarray:
        return (self.cross - self.cross.conj().T) / 2j


def form_pair(A: Relation) -> FormPair:
    F, G = A.F, A.G
    return FormPair(F.conj().T @ G, F.conj().T @ F)


def min_eig(M: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Smallest eigenvalue of a Hermitian matrix and its eigenvector."""
    if M.size == 0:
        return 0.0, None
    H = (M + M.conj().T) / 2
    w, V = np.linalg.eigh(H)
    return float(w[0]), V[:, 0]


def is_psd(M: np.ndarray) -> bool:
    if M.size == 0:
        return True
    lo, _ = min_eig(M)
    # forms of an orthonormal graph basis have norm <= 1/2, so an absolute
    # floor keeps pure rounding noise from failing the test
    return bool(lo >= -PSD_RTOL * max(np.linalg.norm(M, 2), 1.0))


def is_symmetric(A: Relation) -> bool:
    C = form_pair(A).cross
    if C.size == 0:
        return True
    return bool(np.linalg.norm(C - C.conj().T, 2) <= HERM_TOL)


def is_selfadjoint(A: Relation) -> bool:
    return rel.equal(A, rel.adjoint(A))


def is_formally_domain_tight(A: Relation) -> bool:
    return ss.leq(A.dom, rel.adjoint(A).dom)


def is_domain_tight(A: Relation) -> bool:
    return ss.equal(A.dom, rel.adjoint(A).dom)


def is_formally_range_tight(A: Relation) -> bool:
    return ss.leq(A.ran, rel.adjoint(A).ran)


def is_range_tight(A: Relation) -> bool:
    return ss.equal(A.ran, rel.adjoint(A).ran)


def is_singular(A: Relation) -> bool:
    """ran A within mul A**."""
    return ss.leq(A.ran, dec.double_adjoint(A).mul)


def is_regular(A: Relation) -> bool:
    """A** is an operator."""
    return dec.double_adjoint(A).mul.dim == 0


def is_dissipative(A: Relation) -> bool:
    return is_psd(form_pair(A).skew)


def is_accretive(A: Relation) -> bool:
    return is_psd(form_pair(A).hermitian)


def is_nonnegative(A: Relation) -> bool:
    return is_symmetric(A) and is_accretive(A)


def _check_alpha(alpha: float) -> float:
    if not (0 < alpha < math.pi / 2):
        raise ValueError("sector angle must lie in (0, pi/2)")
    return math.tan(alpha)


def sector_forms(A: Relation, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """The two Hermitian matrices tan(a) Re-form -/+ Im-form."""
    t = _check_alpha(alpha)
    fp = form_pair(A)
    return t * fp.hermitian - fp.skew, t * fp.hermitian + fp.skew


def is_sectorial(A: Relation, alpha: float) -> bool:
    lo, hi = sector_forms(A, alpha)
    return is_psd(lo) and is_psd(hi)


def class_forms(A: Relation, cls: str, alpha: float | None = None
                ) -> list[np.ndarray]:
    """Hermitian matrices that must all be PSD for A to be in ``cls``."""
    fp = form_pair(A)
    if cls == "dissipative":
        return [fp.skew]
    if cls == "accretive":
        return [fp.hermitian]
    if cls == "sectorial":
        return list(sector_forms(A, alpha))
    if cls == "symmetric":
        return [fp.skew, -fp.skew]
    if cls == "nonnegative":
        return [fp.skew, -fp.skew, fp.hermitian]
    raise ValueError(f"unknown class {cls!r}")


def violating_coordinates(A: Relation, cls: str, alpha: float | None = None
                          ) -> np.ndarray | None:
    """Graph coordinates of an element breaking the class inequality."""
    for M in class_forms(A, cls, alpha):
        if not is_psd(M):
            return min_eig(M)[1]
    return None


def in_class(A: Relation, cls: str, alpha: float | None = None) -> bool:
    if cls == "symmetric":
        return is_symmetric(A)
    if cls == "nonnegative":
        return is_nonnegative(A)
    if cls == "dissipative":
        return is_dissipative(A)
    if cls == "accretive":
        return is_accretive(A)
    if cls == "sectorial":
        if alpha is None:
            raise ValueError("sectorial class needs an angle")
        return is_sectorial(A, alpha)
    raise ValueError(f"unknown class {cls!r}")


# Exterior points of the closed numerical range, one per class.
EXTERIOR_POINTS = {
    "symmetric": (1j, -1j),
    "dissipative": (-1j,),
    "accretive": (-1.0,),
    "nonnegative": (-1.0,),
    "sectorial": (-1.0,),
}


def _onto(A: Relation, lam: complex) -> bool:
    return rel.shift(A, lam).ran.is_full()


def is_maximal(A: Relation, cls: str, alpha: float | None = None) -> bool:
    """ran(A - lam) = C^n at the class's exterior point.

    For symmetric relations both half planes are tried and either one
    suffices.
    """
    if not in_class(A, cls, alpha):
        raise ClassMismatch(f"relation is not {cls}")
    return any(_onto(A, lam) for lam in EXTERIOR_POINTS[cls])


def _operator_values(A: Relation, D: np.ndarray) -> np.ndarray:
    """Values of the operator part of A on the columns of D (within dom A)."""
    T = rel.operator_matrix(dec.operator_part(A))
    return T @ D


def normality_gap(A: Relation) -> np.ndarray:
    """Gram gap between A and A* over dom A x mul A.

    Parameters (a, b) stand for the element {D a, A_op D a + M b} of A, where
    D and M are orthonormal bases of dom A and mul A.  The matching element
    of A* with the same first entry and the smallest second entry is
    {D a, (A*)_op D a}.  The returned Hermitian matrix is the difference of
    the squared norms of the two second entries.
    """
    star = rel.adjoint(A)
    D = A.dom.basis
    k = A.mul.dim
    TA = _operator_values(A, D)
    TS = _operator_values(star, D)
    r = D.shape[1]
    gap = np.zeros((r + k, r + k), dtype=complex)
    gap[:r, :r] = TA.conj().T @ TA - TS.conj().T @ TS
    gap[r:, r:] = np.eye(k)
    return gap


def is_formally_normal(A: Relation) -> bool:
    """There is an isometry V from A into A* with V{f, g} = {f, h}."""
    if not is_formally_domain_tight(A):
        return False
    gap = normality_gap(A)
    if gap.size == 0:
        return True
    if not is_psd(gap):
        return False
    w = np.linalg.eigvalsh((gap + gap.conj().T) / 2)
    cutoff = 1e-9 * max(1.0, float(np.max(np.abs(w))))
    rank = int(np.sum(w > cutoff))
    return rank <= rel.adjoint(A).mul.dim


def is_normal(A: Relation) -> bool:
    """mul A = mul A*, dom A = (mul A)^perp and A_op normal on H_A."""
    star = rel.adjoint(A)
    if not ss.equal(A.mul, star.mul):
        return False
    H = ss.complement(A.mul)
    if not ss.equal(A.dom, H):
        return False
    if H.dim == 0:
        return True
    V = H.basis
    T = V.conj().T @ _operator_values(A, V)
    comm = T @ T.conj().T - T.conj().T @ T
    return bool(np.linalg.norm(comm, 2) <= 1e-9 * max(1.0, np.linalg.norm(T, 2) ** 2))


def is_tight_extension(A: Relation, B: Relation, V: np.ndarray) -> bool:
    """V(dom A) = dom B intersected with ran V."""
    EA = _require_extension(A, B, V)
    ranV = ss.column_span(V)
    return ss.equal(EA.dom, ss.intersect(B.dom, ranV))


def is_star_tight_extension(A: Relation, B: Relation, V: np.ndarray) -> bool:
    """V^H(dom B*) = dom A*."""
    _require_extension(A, B, V)
    V = np.asarray(V, dtype=complex)
    proj = ss.image(V.conj().T, rel.adjoint(B).dom)
    return ss.equal(proj, rel.adjoint(A).dom)


def _require_extension(A: Relation, B: Relation, V: np.ndarray) -> Relation:
    EA = rel.embed(A, V)
    if EA.n != B.n:
        raise NotAnExtension("embedding lands in a different space")
    if not rel.leq(EA, B):
        raise NotAnExtension("embedded relation is not contained in B")
    return EA


def flags(A: Relation, alpha: float = math.pi / 4) -> dict[str, bool]:
    """All boolean classification flags, in a fixed order."""
    out = {
        "symmetric": is_symmetric(A),
        "selfadjoint": is_selfadjoint(A),
        "formally_domain_tight": is_formally_domain_tight(A),
        "domain_tight": is_domain_tight(A),
        "formally_range_tight": is_formally_range_tight(A),
        "range_tight": is_range_tight(A),
        "singular": is_singular(A),
        "regular": is_regular(A),
        "dissipative": is_dissipative(A),
        "accretive": is_accretive(A),
        "nonnegative": is_nonnegative(A),
        "sectorial": is_sectorial(A, alpha),
        "formally_normal": is_formally_normal(A),
        "normal": is_normal(A),
        "decomposable": bool(dec.is_decomposable(A)[0]),
    }
    for cls in ("symmetric", "dissipative", "accretive", "nonnegative"):
        out[f"maximal_{cls}"] = out[cls] and is_maximal(A, cls)
    out["maximal_sectorial"] = out["sectorial"] and is_maximal(A, "sectorial", alpha)
    return out
