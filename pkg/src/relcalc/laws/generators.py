"""Random relations with prescribed structure.

Each builder takes a numpy Generator and the ambient dimension.  The
finite-dimensional facts used here: dom A* = (mul A)^perp, so A is
formally domain tight iff dom A is orthogonal to mul A, and domain tight
iff dom A = (mul A)^perp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import classify as cl
from .. import relation as rel
from .. import subspace as ss
from ..relation import Relation
from ..subspace import Subspace


def rand_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def rand_subspace(rng, m: int, d: int) -> Subspace:
    if d <= 0:
        return Subspace.zero(m)
    return ss.column_span(rand_complex(rng, m, d))


def rand_subspace_of(rng, S: Subspace, d: int | None = None) -> Subspace:
    """Random subspace of S of dimension d (random when None)."""
    if d is None:
        d = int(rng.integers(0, S.dim + 1))
    if d <= 0 or S.dim == 0:
        return Subspace.zero(S.ambient_dim)
    return ss.column_span(S.basis @ rand_complex(rng, S.dim, d))


def rand_unitary(rng, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rand_complex(rng, n, n))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def rand_hermitian(rng, n: int) -> np.ndarray:
    X = rand_complex(rng, n, n)
    return (X + X.conj().T) / 2


def rand_psd(rng, n: int, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    X = rand_complex(rng, n, rank)
    return X @ X.conj().T


def _dim(rng, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _with_mul(A: Relation, T: Subspace) -> Relation:
    if T.dim == 0:
        return A
    return rel.cw_sum(A, rel.cross(Subspace.zero(A.n), T))


def _dom_and_mul(rng, n: int, maximal: bool | None = None):
    """A domain D and a multivalued part T inside D^perp."""
    D = rand_subspace(rng, n, _dim(rng, 0, n))
    rest = ss.complement(D)
    if maximal is None:
        maximal = bool(rng.integers(0, 2))
    T = rest if maximal else rand_subspace_of(rng, rest)
    return D, T


# -- profiles -----------------------------------------------------------------

def generic(rng, n, graph_dim=None) -> Relation:
    d = _dim(rng, 0, 2 * n) if graph_dim is None else graph_dim
    return Relation(rand_subspace(rng, 2 * n, d))


def operator(rng, n, graph_dim=None) -> Relation:
    k = _dim(rng, 0, n) if graph_dim is None else graph_dim
    if rng.random() < 0.4 and graph_dim is None:
        k = n
    return rel.from_operator(rand_complex(rng, n, n) * 2, rand_subspace(rng, n, k))


def cayley(U: np.ndarray, H: Subspace | None = None) -> Relation:
    """{((I - U)h, i(I + U)h) : h in H}."""
    n = U.shape[0]
    I = np.eye(n)
    Hb = np.eye(n) if H is None else H.basis
    return rel._from_cols((I - U) @ Hb, 1j * (I + U) @ Hb)


def _unitary_with_fixed(rng, n, fixed: int) -> np.ndarray:
    """Random unitary with exactly ``fixed`` eigenvalues equal to 1."""
    V = rand_unitary(rng, n)
    phases = rng.uniform(0.2, 2 * math.pi - 0.2, n)
    phases[:fixed] = 0.0
    return (V * np.exp(1j * phases)) @ V.conj().T


def selfadjoint(rng, n, graph_dim=None) -> Relation:
    fixed = 0 if rng.random() < 0.3 else _dim(rng, 0, n)
    return cayley(_unitary_with_fixed(rng, n, fixed))


def symmetric(rng, n, graph_dim=None) -> Relation:
    if graph_dim is None:
        # keep a few zero relations as edge cases, mostly proper restrictions
        k = 0 if rng.random() < 0.1 else _dim(rng, 1, max(1, n - 1))
    else:
        k = graph_dim
    fixed = _dim(rng, 0, n)
    U = _unitary_with_fixed(rng, n, fixed)
    return cayley(U, rand_subspace(rng, n, k))


def _form_relation(rng, n, M_of, maximal=None) -> Relation:
    D, T = _dom_and_mul(rng, n, maximal)
    A = rel.from_operator(M_of(rng, n), D)
    return _with_mul(A, T)


def dissipative(rng, n, graph_dim=None) -> Relation:
    return _form_relation(rng, n, lambda r, k: 2 * rand_hermitian(r, k) + 1j * rand_psd(r, k))


def accretive(rng, n, graph_dim=None) -> Relation:
    return _form_relation(rng, n, lambda r, k: rand_psd(r, k) + 2j * rand_hermitian(r, k))


def nonnegative(rng, n, graph_dim=None) -> Relation:
    return _form_relation(rng, n, lambda r, k: rand_psd(r, k))


def sectorial_matrix(rng, n, alpha: float) -> np.ndarray:
    """H + iK with |(Kf, f)| <= tan(alpha) (Hf, f)."""
    X = rand_complex(rng, n, _dim(rng, 0, n))
    H = X @ X.conj().T
    w, V = np.linalg.eigh(H)
    Hs = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
    B = rand_hermitian(rng, n)
    nb = np.linalg.norm(B, 2)
    if nb > 0:
        B *= rng.uniform(0, 0.999) * math.tan(alpha) / nb
    return H + 1j * (Hs @ B @ Hs)


def sectorial(rng, n, graph_dim=None, alpha: float = math.pi / 4) -> Relation:
    return _form_relation(rng, n, lambda r, k: sectorial_matrix(r, k, alpha))


def singular(rng, n, graph_dim=None) -> Relation:
    S = rand_subspace(rng, n, _dim(rng, 0, n))
    T = rand_subspace(rng, n, _dim(rng, 0, n))
    return rel.cross(S, T)


def purely_multivalued(rng, n, graph_dim=None) -> Relation:
    T = rand_subspace(rng, n, _dim(rng, 0, n) if graph_dim is None else graph_dim)
    return rel.cross(Subspace.zero(n), T)


def formally_domain_tight(rng, n, graph_dim=None) -> Relation:
    T = rand_subspace(rng, n, _dim(rng, 0, n))
    D = rand_subspace_of(rng, ss.complement(T))
    A = rel.from_operator(2 * rand_complex(rng, n, n), D)
    return _with_mul(A, T)


def domain_tight(rng, n, graph_dim=None) -> Relation:
    """dom A = (mul A)^perp; in finite dimension this forces mul A = mul A*."""
    T = rand_subspace(rng, n, _dim(rng, 0, n))
    A = rel.from_operator(2 * rand_complex(rng, n, n), ss.complement(T))
    return _with_mul(A, T)


def normal(rng, n, graph_dim=None) -> Relation:
    T = rand_subspace(rng, n, _dim(rng, 0, n))
    H = ss.complement(T)
    p = H.dim
    W = H.basis @ rand_unitary(rng, p) if p else H.basis
    N = (W * (2 * rand_complex(rng, p))) @ W.conj().T
    return _with_mul(rel.from_operator(N, H), T)


PROFILES = {
    "generic": generic,
    "operator": operator,
    "symmetric": symmetric,
    "selfadjoint": selfadjoint,
    "dissipative": dissipative,
    "accretive": accretive,
    "nonnegative": nonnegative,
    "sectorial": sectorial,
    "singular": singular,
    "purely-multivalued": purely_multivalued,
    "formally-domain-tight": formally_domain_tight,
    "domain-tight": domain_tight,
    "normal": normal,
}


def _certify(name: str, A: Relation, alpha: float) -> bool:
    if name in ("generic",):
        return True
    if name == "operator":
        return A.mul.dim == 0
    if name == "selfadjoint":
        return cl.is_selfadjoint(A)
    if name == "symmetric":
        return cl.is_symmetric(A)
    if name == "dissipative":
        return cl.is_dissipative(A)
    if name == "accretive":
        return cl.is_accretive(A)
    if name == "nonnegative":
        return cl.is_nonnegative(A)
    if name == "sectorial":
        return cl.is_sectorial(A, alpha)
    if name == "singular":
        return cl.is_singular(A)
    if name == "purely-multivalued":
        return A.dom.dim == 0
    if name == "formally-domain-tight":
        return cl.is_formally_domain_tight(A)
    if name == "domain-tight":
        return cl.is_domain_tight(A)
    if name == "normal":
        return cl.is_normal(A)
    raise KeyError(name)


@dataclass(frozen=True)
class GenProfile:
    name: str
    n: int
    graph_dim: int | None = None
    seed: int = 0
    alpha: float = math.pi / 4


class GenerationError(RuntimeError):
    pass


def build(name: str, rng, n: int, graph_dim=None, alpha: float = math.pi / 4
          ) -> Relation:
    """Draw one relation of the named profile from ``rng`` (unchecked)."""
    if name not in PROFILES:
        raise KeyError(f"unknown profile {name!r}")
    if n < 1:
        raise ValueError("dimension must be positive")
    if graph_dim is not None:
        limit = n if name in ("operator", "symmetric", "purely-multivalued") else 2 * n
        if name == "symmetric":
            limit = n
        if not (0 <= graph_dim <= limit) or name not in (
                "generic", "operator", "symmetric", "purely-multivalued"):
            raise ValueError(f"graph_dim {graph_dim} not feasible for {name}")
    if name == "sectorial":
        return sectorial(rng, n, graph_dim, alpha)
    return PROFILES[name](rng, n, graph_dim)


def generate(profile: GenProfile) -> Relation:
    """Deterministic draw for a profile, certified by the class predicate."""
    rng = np.random.default_rng(profile.seed)
    A = build(profile.name, rng, profile.n, profile.graph_dim, profile.alpha)
    if not _certify(profile.name, A, profile.alpha):
        raise GenerationError(f"draw for {profile.name} failed certification")
    return A
