"""Eigenvalues, regular points, defect numbers and the numerical range.

Everything is phrased through the pencil ``G - lam F`` of an orthonormal
graph basis.  Graph coordinates in ker F produce the multivalued part; on
the remaining coordinates the pencil is compressed to (mul A)^perp, where
the eigenvalue problem becomes an ordinary (possibly rectangular) pencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import relation as rel
from . import subspace as ss
from .relation import ElementPair, Relation
from .subspace import RANK_RTOL

GAMMA_RTOL = 1e-9
EIG_VERIFY_RTOL = 1e-6
EIG_MERGE_TOL = 1e-6
BISECT_MAX_ITER = 200
BISECT_TARGET = 1e-12

DEFAULT_SAMPLE_POINTS = (0.0, 1.0, -1.0, 1j, -1j)


@dataclass
class SpectralReport:
    eigenvalues: list[tuple[complex, int]]
    mul_dim: int
    every_point: bool = False
    samples: list[tuple[complex, float, int]] = field(default_factory=list)

    def values(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.eigenvalues], dtype=complex)


@dataclass
class _Reduced:
    B: np.ndarray  # U^H G Q
    C: np.ndarray  # U^H F Q
    FQ: np.ndarray
    Q: np.ndarray


def _reduce(A: Relation) -> _Reduced:
    """Compress the pencil to (ker F)^perp x (mul A)^perp."""
    F, G = A.F, A.G
    d = A.dim
    if d == 0:
        Q = np.zeros((0, 0), dtype=complex)
    else:
        K = A._ker_F
        Q = ss.complement(ss.Subspace(K)).basis if K.shape[1] else np.eye(d, dtype=complex)
    U = ss.complement(A.mul).basis
    Uh = U.conj().T
    FQ = F @ Q
    return _Reduced(Uh @ (G @ Q), Uh @ FQ, FQ, Q)


def _gamma_tol(A: Relation, lam: complex) -> float:
    nG = np.linalg.norm(A.G, 2) if A.dim else 0.0
    nF = np.linalg.norm(A.F, 2) if A.dim else 0.0
    return GAMMA_RTOL * (nG + abs(lam) * nF)


def _sigma_min(M: np.ndarray) -> float:
    p, r = M.shape
    if r == 0:
        return np.inf
    if p < r:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def _kernel_dim(M: np.ndarray, tol: float) -> int:
    p, r = M.shape
    if r == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(s > tol))
    return r - rank


def eigenvalues(A: Relation, sample_points=()) -> SpectralReport:
    """Eigenvalues lam with {f, lam f} in A for some nonzero f.

    When the reduced pencil is singular every complex number is an
    eigenvalue; this is flagged by ``every_point`` and the list is empty.
    """
    red = _reduce(A)
    B, C = red.B, red.C
    p, r = B.shape
    report = SpectralReport([], A.mul.dim)
    if 0 < r and p < r:
        report.every_point = True
    elif r > 0:
        scale = max(np.linalg.norm(B, 2), np.linalg.norm(C, 2), 1e-300)
        # normal rank from two generic points
        probes = (0.6180339887 + 0.3141592654j, -0.7071067812 + 1.4142135624j)
        normal_rank = max(r - _kernel_dim(B - z * C, RANK_RTOL * scale * (1 + abs(z)))
                          for z in probes)
        if normal_rank < r:
            report.every_point = True
        else:
            report.eigenvalues = _finite_eigenvalues(B, C)
    for lam in sample_points:
        report.samples.append((complex(lam), regularity_constant(A, lam),
                               defect(A, lam)))
    return report


def _finite_eigenvalues(B: np.ndarray, C: np.ndarray) -> list[tuple[complex, int]]:
    p, r = B.shape
    if p == r:
        cand = sla.eig(B, C, right=False)
        verify = False
    else:
        # project a tall pencil onto r rows; spurious roots are filtered below
        rng = np.random.default_rng(20240531)
        R = rng.standard_normal((r, p)) + 1j * rng.standard_normal((r, p))
        cand = sla.eig(R @ B, R @ C, right=False)
        verify = True
    nB, nC = np.linalg.norm(B, 2), np.linalg.norm(C, 2)
    cand = [complex(z) for z in cand
            if np.isfinite(z) and abs(z) * nC <= 1e12 * max(nB, 1e-300)]
    found: list[complex] = []
    for z in cand:
        sc = nB + abs(z) * nC
        if verify and _sigma_min(B - z * C) > EIG_VERIFY_RTOL * sc:
            continue
        if any(abs(z - w) <= EIG_MERGE_TOL * max(1.0, abs(w)) for w in found):
            continue
        found.append(z)
    out = []
    for z in sorted(found, key=lambda w: (round(w.real, 9), round(w.imag, 9))):
        sc = nB + abs(z) * nC
        mult = max(1, _kernel_dim(B - z * C, 1e-7 * sc))
        out.append((z, mult))
    return out


def regularity_constant(A: Relation, lam: complex, snap: bool = True) -> float:
    """Largest c with ||f' - lam f|| >= c ||f|| for all {f, f'} in A.

    Returns ``inf`` when dom A = {0}.
    """
    red = _reduce(A)
    r = red.Q.shape[1]
    if r == 0:
        return float("inf")
    # rescale coordinates so that ||FQ a|| = ||b||
    U, s, Vh = np.linalg.svd(red.FQ, full_matrices=False)
    X = (red.B - lam * red.C) @ (Vh.conj().T / s)
    c = _sigma_min(X)
    if snap and c <= _gamma_tol(A, lam):
        return 0.0
    return c


def defect(A: Relation, lam: complex) -> int:
    """dim ran(A - lam)^perp."""
    n = A.n
    if A.dim == 0:
        return n
    M = A.G - lam * A.F
    s = np.linalg.svd(M, compute_uv=False)
    ref = max(s[0] if s.size else 0.0, 1.0)
    return n - int(np.sum(s > RANK_RTOL * ref))


def is_regular_type(A: Relation, lam: complex) -> bool:
    return regularity_constant(A, lam) > _gamma_tol(A, lam)


def in_resolvent_set(A: Relation, lam: complex) -> bool:
    return is_regular_type(A, lam) and defect(A, lam) == 0


def resolvent_norm_bound_check(A: Relation, mu: complex, lam: complex,
                               slack: float = 1e-8) -> bool:
    """Check ||(A-lam)^-1|| <= ||(A-mu)^-1|| / (1 - |lam-mu| ||(A-mu)^-1||)."""
    c_mu = regularity_constant(A, mu)
    if not c_mu > 0:
        raise ValueError("mu is not a point of regular type")
    inv_mu = 1.0 / c_mu
    q = abs(lam - mu) * inv_mu
    if q >= 1:
        raise ValueError("lam is too far from mu for the estimate")
    c_lam = regularity_constant(A, lam, snap=False)
    lhs = 1.0 / c_lam if c_lam > 0 else np.inf
    rhs = inv_mu / (1 - q)
    return lhs <= rhs * (1 + slack)


def rayleigh(A: Relation, z: np.ndarray) -> complex:
    """Value (f', f) / ||f||^2 of the element with graph coordinates z."""
    e = rel.element(A, z)
    return complex(np.vdot(e.f, e.f_prime) / np.vdot(e.f, e.f).real)


def nrange_sample(A: Relation, count: int, seed: int) -> np.ndarray:
    """Random points of the numerical range.

    By convention W(A) = {0} when dom A = {0}; the single point 0 is returned.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if A.dom.dim == 0:
        return np.zeros(1, dtype=complex)
    rng = np.random.default_rng(seed)
    d = A.dim
    Z = rng.standard_normal((d, count)) + 1j * rng.standard_normal((d, count))
    Fz = A.F @ Z
    Gz = A.G @ Z
    num = np.einsum("ij,ij->j", Fz.conj(), Gz)
    den = np.einsum("ij,ij->j", Fz.conj(), Fz).real
    return num / den


def _coeffs(A: Relation, z1, z2):
    e1, e2 = rel.element(A, z1), rel.element(A, z2)
    f1, g1, f2, g2 = e1.f, e1.f_prime, e2.f, e2.f_prime
    return f1, g1, f2, g2


def nrange_convex_witness(A: Relation, z1: np.ndarray, z2: np.ndarray,
                          u: float) -> ElementPair:
    """An element with value u lam1 + (1 - u) lam2 and unit first entry.

    ``z1`` and ``z2`` are graph coordinates of elements {f_i, g_i} with
    ||f_i|| = 1 and values lam_i = (g_i, f_i).  The element is sought in
    the plane spanned by the two, in the form x1 = t1, x2 = delta t2(t1),
    where t2(t1) keeps ||x1 f1 + x2 f2|| = 1 and delta makes the
    normalized value real along the curve; t1 is then found by bisection.
    """
    if not (0.0 <= u <= 1.0):
        raise ValueError("u must lie in [0, 1]")
    f1, g1, f2, g2 = _coeffs(A, z1, z2)
    for f in (f1, f2):
        if abs(np.linalg.norm(f) - 1) > 1e-10:
            raise ValueError("witness inputs need ||f|| = 1")
    ip = lambda a, b: complex(np.vdot(b, a))  # (a, b), linear in a
    lam1, lam2 = ip(g1, f1), ip(g2, f2)
    if abs(lam1 - lam2) <= 1e-14 * max(1.0, abs(lam1), abs(lam2)):
        raise ValueError("the two values coincide; the segment is degenerate")
    dl = lam1 - lam2
    # H(x1, x2) = |x1|^2 + c1 conj(x1) x2 + c2 x1 conj(x2)
    c1 = (ip(g2, f1) - lam2 * ip(f2, f1)) / dl
    c2 = (ip(g1, f2) - lam2 * ip(f1, f2)) / dl
    w = np.conj(c1) - c2
    delta = 1.0 + 0j if abs(w) <= 1e-15 else w / abs(w)
    beta = (delta * ip(f2, f1)).real
    beta = min(1.0, max(-1.0, beta))
    gamma = (delta * c1 + np.conj(delta) * c2).real
    sign = 1.0 if beta >= 0 else -1.0

    def t2_of(t1):
        return -beta * t1 + sign * np.sqrt(max(0.0, 1 - (1 - beta * beta) * t1 * t1))

    def h(t1):
        t2 = t2_of(t1)
        return t1 * t1 + gamma * t1 * t2

    lo, hi = 0.0, 1.0
    hlo, hhi = h(lo) - u, h(hi) - u
    t1 = lo if abs(hlo) <= abs(hhi) else hi
    if abs(hlo) > BISECT_TARGET and abs(hhi) > BISECT_TARGET:
        if hlo * hhi > 0:
            raise RuntimeError("bisection bracket lost")
        for _ in range(BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            hm = h(mid) - u
            t1 = mid
            if abs(hm) <= BISECT_TARGET:
                break
            if (hm < 0) == (hlo < 0):
                lo, hlo = mid, hm
            else:
                hi = mid
            if hi - lo <= 1e-17:
                break
        else:
            raise RuntimeError("bisection did not converge")
    x1, x2 = t1, delta * t2_of(t1)
    return ElementPair(x1 * f1 + x2 * f2, x1 * g1 + x2 * g2)
