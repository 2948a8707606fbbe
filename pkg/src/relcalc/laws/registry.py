"""Executable laws: identities of the relation calculus checked on random input.

Each law body receives a seeded Generator, the ambient dimension and a
:class:`Check` that accumulates residuals.  Subspace identities contribute
their opening (or inclusion residual); logical statements contribute 0 when
they hold and 1 when they do not.  A trial passes when the worst residual is
at most ``EQ_TOL``.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .. import classify as cl
from .. import decompose as dec
from .. import relation as rel
from .. import spectral as sp
from .. import subspace as ss
from ..relation import Relation
from ..subspace import EQ_TOL, Subspace
from . import generators as gen

DEGENERATE_NOTE = "degenerate: vacuously/trivially true in finite dimension"


class UnknownLaw(KeyError):
    pass


class Check:
    """Collects the worst residual of a trial and what produced it."""

    def __init__(self):
        self.residual = 0.0
        self.label = ""

    def value(self, label: str, r: float) -> None:
        r = float(r)
        if math.isnan(r):
            r = math.inf
        if r > self.residual or (self.label == "" and r == self.residual and r > 0):
            self.residual, self.label = r, label

    def eq(self, label: str, X, Y) -> None:
        if isinstance(X, Relation):
            self.value(label, rel.opening(X, Y))
        else:
            self.value(label, ss.opening(X, Y))

    def sub(self, label: str, X, Y) -> None:
        if isinstance(X, Relation):
            self.value(label, rel.inclusion_residual(X, Y))
        else:
            self.value(label, ss.inclusion_residual(X, Y))

    def holds(self, label: str, cond) -> None:
        self.value(label, 0.0 if bool(cond) else 1.0)

    def iff(self, label: str, a, b) -> None:
        self.holds(label, bool(a) == bool(b))


@dataclass
class Law:
    law_id: str
    anchor: str
    body: Callable[[np.random.Generator, int, Check], None]
    degenerate: bool = False


@dataclass
class Failure:
    seed: int
    n: int
    residual: float
    witness: str


@dataclass
class LawReport:
    law_id: str
    paper_anchor: str
    trials: int
    failures: list[Failure] = field(default_factory=list)
    max_residual: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures


LAWS: dict[str, Law] = {}


def law(law_id: str, anchor: str, degenerate: bool = False):
    def wrap(fn):
        LAWS[law_id] = Law(law_id, anchor, fn, degenerate)
        return fn
    return wrap


# -- helpers ---------------------------------------------------------------------

adj = rel.adjoint
A2 = dec.double_adjoint


def draw(rng, n, *names) -> Relation:
    name = names[int(rng.integers(0, len(names)))]
    return gen.build(name, rng, n)


def full(n) -> Subspace:
    return Subspace.full(n)


def zero(n) -> Subspace:
    return Subspace.zero(n)


def orthogonal(S: Subspace, T: Subspace) -> bool:
    if S.dim == 0 or T.dim == 0:
        return True
    return np.linalg.norm(S.basis.conj().T @ T.basis, 2) <= EQ_TOL


def re_plus_i_im(A: Relation, sign: float = 1.0) -> Relation:
    return rel.op_sum(dec.real_part(A), rel.scalar_mul(sign * 1j, dec.imag_part(A)))


def compress_to(A: Relation, S: Subspace) -> Relation | None:
    """A as a relation in S (None when S = {0})."""
    if S.dim == 0:
        return None
    return rel.compress(A, S.basis)


def adjoint_within(A: Relation, S: Subspace) -> Relation:
    """Adjoint of A taken in the subspace S, embedded back into C^n."""
    if S.dim == 0:
        return rel.zero_relation(A.n)
    return rel.embed(adj(rel.compress(A, S.basis)), S.basis)


ALL_PROFILES = ("generic", "operator", "symmetric", "selfadjoint", "dissipative",
                "accretive", "nonnegative", "sectorial", "singular",
                "purely-multivalued", "formally-domain-tight", "domain-tight",
                "normal")


# -- adjoint calculus ------------------------------------------------------------

@law("adjoint-duality", "(dom A)^perp = mul A*, (ran A)^perp = ker A*, A** = A")
def _adjoint_duality(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    ck.eq("(dom A)^perp = mul A*", ss.complement(A.dom), S.mul)
    ck.eq("(ran A)^perp = ker A*", ss.complement(A.ran), S.ker)
    ck.eq("A** = A", adj(S), A)
    ck.eq("(A^-1)* = (A*)^-1", adj(rel.inverse(A)), rel.inverse(S))


@law("cw-adjoint", "(A +^ B)* = A* cap B*; (A (+)^ B)* = A* (+)^ B*")
def _cw_adjoint(rng, n, ck):
    A, B = draw(rng, n, *ALL_PROFILES), draw(rng, n, *ALL_PROFILES)
    ck.eq("(A +^ B)* = A* cap B*", adj(rel.cw_sum(A, B)), rel.intersect(adj(A), adj(B)))
    n1 = int(rng.integers(1, n))
    C, D = gen.generic(rng, n1), gen.generic(rng, n - n1)
    ck.eq("orthogonal sum adjoint", adj(rel.cw_orth_sum(C, D)),
          rel.cw_orth_sum(adj(C), adj(D)))


@law("opsum-adjoint", "A* + B* within (A + B)*, equality for everywhere defined B")
def _opsum_adjoint(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    B = draw(rng, n, "generic", "operator", "formally-domain-tight", "domain-tight")
    ck.sub("A* + B* in (A+B)*", rel.op_sum(adj(A), adj(B)), adj(rel.op_sum(A, B)))
    M = rel.from_operator(2 * gen.rand_complex(rng, n, n))
    ck.eq("A* + M* = (A+M)*", rel.op_sum(adj(A), adj(M)), adj(rel.op_sum(A, M)))


@law("product-adjoint", "B*A* within (AB)*, equality when A is everywhere defined")
def _product_adjoint(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    B = draw(rng, n, *ALL_PROFILES)
    ck.sub("B*A* in (AB)*", rel.product(adj(B), adj(A)), adj(rel.product(A, B)))
    M = rel.from_operator(2 * gen.rand_complex(rng, n, n))
    ck.eq("(MB)* = B*M*", adj(rel.product(M, B)), rel.product(adj(B), adj(M)))


@law("projection-product",
     "AR = A +^ (Y x {0}), A(I-R) = (dom A + X) x mul A, R onto dom A + X")
def _projection_product(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    M = adj(A).mul
    X = gen.rand_subspace_of(rng, M)
    Y = ss.intersect(M, ss.complement(X))
    DX = ss.sum(A.dom, X)
    R = DX.projector
    ck.eq("AR", rel.product(A, rel.from_operator(R)),
          rel.cw_sum(A, rel.cross(Y, zero(n))))
    ck.eq("A(I-R)", rel.product(A, rel.from_operator(np.eye(n) - R)),
          rel.cross(DX, A.mul))


@law("dom-ran-sum", "C^n = dom A** + ran A* = ran A** + dom A*")
def _dom_ran_sum(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S, SS = adj(A), A2(A)
    ck.eq("dom A** + ran A*", ss.sum(SS.dom, S.ran), full(n))
    ck.eq("ran A** + dom A*", ss.sum(SS.ran, S.dom), full(n))


# -- decompositions ----------------------------------------------------------------

@law("canonical", "A = A_reg + A_sing, mul A_sing = mul A, A_reg an operator")
def _canonical(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    d = dec.canonical(A)
    reg, sing = d.parts
    ck.value("A_reg + A_sing = A", d.identity_residual)
    ck.eq("mul A_sing = mul A", sing.mul, A.mul)
    ck.holds("A_reg is an operator", reg.mul.dim == 0)
    ck.sub("ran A_sing in mul A**", sing.ran, A2(A).mul)
    ck.holds("A_reg regular", cl.is_regular(reg))
    ck.holds("A_sing singular", cl.is_singular(sing))


@law("singular-equiv",
     "A singular <=> A* = dom A* x mul A* <=> dom A* = ker A* <=> A** = dom A x mul A**")
def _singular_equiv(rng, n, ck):
    A = draw(rng, n, "singular", "singular", "purely-multivalued", "generic",
             "operator", "domain-tight")
    s = cl.is_singular(A)
    S, SS = adj(A), A2(A)
    ck.iff("A* = dom A* x mul A*", s, rel.equal(S, rel.cross(S.dom, S.mul)))
    ck.iff("dom A* = ker A*", s, ss.equal(S.dom, S.ker))
    ck.iff("A** = dom A x mul A**", s, rel.equal(SS, rel.cross(A.dom, SS.mul)))
    ck.iff("A = dom A x mul A", s, rel.equal(A, rel.cross(A.dom, A.mul)))
    ck.iff("dom A = ker A", s, ss.equal(A.dom, A.ker))
    for label, B in (("A^-1", rel.inverse(A)), ("A*", S), ("A**", SS)):
        ck.iff(f"{label} singular", s, cl.is_singular(B))
    ck.iff("regular <=> dom A* = C^n", cl.is_regular(A), S.dom.is_full())


@law("componentwise-unique",
     "A = B +^ A_mul with ran B in H_A forces B = A_op")
def _componentwise_unique(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    op, mp = dec.operator_part(A), dec.mul_part(A)
    H = dec.hilbert_part(A)
    n2 = 2 * n
    probes = []
    if op.dim:
        # same subspace, scrambled basis
        mix = gen.rand_complex(rng, op.dim, op.dim) + 2 * np.eye(op.dim)
        probes.append(("rebased", rel.Relation(ss.column_span(op.basis @ mix)), True))
        for eps in (1e-6, 1e-3, 1.0):
            E = gen.rand_complex(rng, n2, op.dim)
            E[n:] = H.projector @ E[n:]
            B = rel.Relation(ss.column_span(op.basis + eps * E))
            probes.append((f"perturbed {eps:g}", B, False))
        sub = gen.rand_subspace_of(rng, op.dom, max(0, op.dom.dim - 1))
        probes.append(("restricted", rel.product(op, rel.identity_on(sub)), False))
    if A.mul.dim:
        T = gen.rand_subspace_of(rng, A.mul, max(1, A.mul.dim))
        probes.append(("with mul", rel.cw_sum(op, rel.cross(zero(n), T)), False))
    probes.append(("A_op", op, True))
    for label, B, expected in probes:
        ok1 = ss.leq(B.ran, H)
        ok2 = rel.equal(rel.cw_sum(B, mp), A)
        if expected:
            ck.holds(f"{label} satisfies both conditions", ok1 and ok2)
        if ok1 and ok2:
            ck.eq(f"{label} = A_op", B, op)


@law("reglem-equiv",
     "decomposable <=> dom A_op = dom A <=> A_reg = A_op <=> A_reg in A "
     "<=> ran (I-P)A in mul A <=> A = A_reg +^ A_mul")
def _reglem_equiv(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    op, mp, reg = dec.operator_part(A), dec.mul_part(A), dec.regular_part(A)
    stmts = [
        rel.equal(rel.cw_sum(op, mp), A),
        ss.equal(op.dom, A.dom),
        rel.equal(reg, op),
        rel.leq(reg, A),
        dec.is_decomposable(A)[0],
        rel.equal(rel.cw_sum(reg, mp), A),
    ]
    for i, s in enumerate(stmts[1:], start=2):
        ck.iff(f"statement 1 <=> statement {i}", stmts[0], s)
    ck.holds("finite-dimensional relations are decomposable", stmts[0])
    ck.eq("A = A_reg +^ A_mul", rel.cw_sum(reg, mp), A)


@law("maxpart", "A_m = P_m A is an operator equal to A_op, and A = A_m +^ A_mul")
def _maxpart(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    d = dec.maximal_part(A)
    am = d.parts[0]
    ck.holds("A_m is an operator", am.mul.dim == 0)
    ck.eq("A_m = A_op", am, dec.operator_part(A))
    ck.value("A = A_m +^ A_mul", d.identity_residual)


@law("orth-iff", "A = A_op (+)^ A_mul orthogonally <=> mul A** within mul A*")
def _orth_iff(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    cond = ss.leq(A2(A).mul, S.mul)
    ck.iff("condition <=> dom A orthogonal to mul A", cond, orthogonal(A.dom, A.mul))
    try:
        d = dec.orthogonal_decompose(A)
    except dec.NotOrthogonal as exc:
        ck.holds("refused although the condition holds", not cond)
        w = exc.witness
        ck.holds("witness lies in dom A", ss.contains(A.dom, w))
        ck.holds("witness is not orthogonal to mul A",
                 np.linalg.norm(A.mul.projector @ w) > EQ_TOL)
        return
    ck.holds("succeeded although the condition fails", cond)
    ck.value("reassembly", d.identity_residual)
    ck.value("dom A_op in H_A", d.extra["dom_residual"])
    ck.value("ran A_op in H_A", d.extra["ran_residual"])
    H, M = d.extra["splitting"]
    ck.eq("C^n = H_A + mul A**", ss.sum(H, M), full(n))
    ck.holds("H_A orthogonal to mul A**", orthogonal(H, M))
    # the adjoint splits along the same decomposition
    op = d.parts[0]
    ck.eq("A* = (A_op)* (+)^ (A_mul)*", rel.cw_sum(adjoint_within(op, H),
                                                  rel.cross(zero(n), M)), S)


@law("adjoint-orth-iff", "A* = (A*)_op (+)^ (A*)_mul orthogonally <=> mul A* within mul A**")
def _adjoint_orth_iff(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    d = dec.adjoint_decompose(A)
    ck.value("A* = (A*)_op +^ (A*)_mul", d.identity_residual)
    direct = orthogonal(S.dom, S.mul)
    cond = ss.leq(S.mul, A2(A).mul)
    ck.iff("orthogonal <=> mul A* in mul A**", direct, cond)
    ck.iff("reported flag", d.extra["orthogonal"], direct)


@law("opstar-commute", "mul A** = mul A* implies (A_op)* = (A*)_op, adjoint taken in H_A")
def _opstar_commute(rng, n, ck):
    A = draw(rng, n, "domain-tight", "selfadjoint", "normal", "formally-domain-tight",
             "generic")
    S = adj(A)
    if not ss.equal(A2(A).mul, S.mul):
        return
    H = dec.hilbert_part(A)
    ck.eq("(A_op)* = (A*)_op", adjoint_within(dec.operator_part(A), H),
          dec.operator_part(S))


@law("mulba",
     "A domain tight with mul A = mul A* <=> A = B (+)^ A_mul, B densely defined "
     "domain tight in H_A, A_mul selfadjoint in mul A**; then B = A_op")
def _mulba(rng, n, ck):
    A = draw(rng, n, "domain-tight", "formally-domain-tight", "generic", "selfadjoint",
             "symmetric", "operator")
    S = adj(A)
    lhs = cl.is_domain_tight(A) and ss.equal(A.mul, S.mul)
    B, mp = dec.operator_part(A), dec.mul_part(A)
    H, M = dec.hilbert_part(A), A2(A).mul
    parts = [rel.equal(rel.cw_sum(B, mp), A), ss.leq(B.dom, H), ss.leq(B.ran, H)]
    if H.dim and all(parts):
        Bc = rel.compress(B, H.basis)
        parts.append(Bc.dom.is_full())
        parts.append(cl.is_domain_tight(Bc))
    if M.dim:
        parts.append(cl.is_selfadjoint(rel.compress(mp, M.basis)))
    rhs = all(parts)
    ck.iff("both sides agree", lhs, rhs)


# -- numerical range and spectra -------------------------------------------------------

def _unit_coords(rng, A: Relation) -> np.ndarray:
    z = gen.rand_complex(rng, A.dim)
    return z / np.linalg.norm(A.F @ z)


def _value(A: Relation, z) -> complex:
    e = rel.element(A, z)
    return complex(np.vdot(e.f, e.f_prime))


@law("convexity", "W(A) is convex: witnesses for every point of a segment")
def _convexity(rng, n, ck):
    for _ in range(20):
        A = draw(rng, n, "generic", "operator", "dissipative", "formally-domain-tight",
                 "symmetric", "sectorial")
        if A.dom.dim == 0:
            continue
        z1, z2 = _unit_coords(rng, A), _unit_coords(rng, A)
        l1, l2 = _value(A, z1), _value(A, z2)
        if abs(l1 - l2) > 1e-6:
            break
    else:
        return
    for u in (0.0, 0.25, 0.5, 0.75, 1.0):
        e = sp.nrange_convex_witness(A, z1, z2, u)
        target = u * l1 + (1 - u) * l2
        ck.value(f"||f|| = 1 at u={u}", abs(np.linalg.norm(e.f) - 1))
        ck.value(f"value at u={u}", abs(complex(np.vdot(e.f, e.f_prime)) - target))
        ck.holds(f"witness in A at u={u}", rel.contains(A, e.f, e.f_prime))


@law("nr-mulinc",
     "W(A) not C implies mul A within mul A* and ||(A-l)^-1|| <= 1/dist(l, W(A))")
def _nr_mulinc(rng, n, ck):
    name = ("dissipative", "accretive", "sectorial", "nonnegative")[int(rng.integers(0, 4))]
    A = gen.build(name, rng, n)
    S = adj(A)
    ck.sub("mul A in mul A*", A.mul, S.mul)
    # exterior points at known distance from the closed numerical range
    s = float(rng.uniform(0.1, 3.0))
    lam, dist = {"dissipative": (-1j * s, s), "accretive": (-s, s),
                 "nonnegative": (-s, s), "sectorial": (-s, s)}[name]
    c = sp.regularity_constant(A, lam, snap=False)
    if math.isfinite(c):
        ck.value("c(lam) >= dist(lam, W)", max(0.0, dist - c) / dist)


@law("maximal-mul", "A maximal with respect to W(A) implies mul A = mul A*")
def _maximal_mul(rng, n, ck):
    name = ("dissipative", "accretive", "sectorial", "nonnegative", "selfadjoint",
            "symmetric")[int(rng.integers(0, 6))]
    A = gen.build(name, rng, n)
    cls = "symmetric" if name == "selfadjoint" else name
    if cl.is_maximal(A, cls, math.pi / 4 if cls == "sectorial" else None):
        ck.eq("mul A = mul A*", A.mul, adj(A).mul)


def _admissible_mu(rng, A: Relation):
    for _ in range(10):
        mu = complex(*rng.uniform(-3, 3, 2))
        c = sp.regularity_constant(A, mu)
        if c > 0:
            return mu, c
    return None, 0.0


@law("resolvent-est",
     "||(A-l)^-1|| <= ||(A-m)^-1|| / (1 - |l-m| ||(A-m)^-1||) near a regular point m")
def _resolvent_est(rng, n, ck):
    A = draw(rng, n, "generic", "operator", "formally-domain-tight", "dissipative",
             "symmetric", "singular", "domain-tight")
    mu, c_mu = _admissible_mu(rng, A)
    if mu is None:
        return
    if math.isinf(c_mu):
        ck.holds("purely multivalued case", sp.resolvent_norm_bound_check(A, mu, mu + 1))
        return
    rho = float(rng.uniform(0, 0.99))
    lam = mu + c_mu * rho * np.exp(1j * rng.uniform(0, 2 * math.pi))
    c_lam = sp.regularity_constant(A, lam, snap=False)
    rhs = (1 / c_mu) / (1 - abs(lam - mu) / c_mu)
    lhs = 1 / c_lam if c_lam > 0 else math.inf
    ck.value("resolvent estimate", max(0.0, lhs / rhs - 1))
    ck.holds("bound check", sp.resolvent_norm_bound_check(A, mu, lam))
    if rho < 0.5:
        ck.holds("regular type is an open condition", c_lam > 0)


@law("defect-const", "dim ran(A - l)^perp is constant on components of the regular-type set")
def _defect_const(rng, n, ck, points: int = 100):
    A = draw(rng, n, "generic", "operator", "formally-domain-tight", "symmetric",
             "dissipative", "domain-tight", "singular")
    rep = sp.eigenvalues(A)
    if rep.every_point:
        return
    eig = rep.values()
    center = complex(*rng.uniform(-2, 2, 2))
    lams = []
    while len(lams) < points:
        r = 2.5 * math.sqrt(rng.random())
        lam = center + r * np.exp(1j * rng.uniform(0, 2 * math.pi))
        if eig.size == 0 or np.min(np.abs(eig - lam)) >= 0.1:
            lams.append(lam)
    defects = {sp.defect(A, lam) for lam in lams}
    ck.holds(f"one defect value, got {sorted(defects)}", len(defects) == 1)
    # step bound: ran(A-l)^perp is close to ran(A-m)^perp
    mu = lams[0]
    c_mu = sp.regularity_constant(A, mu)
    ck.holds("sampled point is of regular type", c_mu > 0)
    if not (0 < c_mu < math.inf):
        return
    lam = mu + 0.5 * c_mu * np.exp(1j * rng.uniform(0, 2 * math.pi))
    Nl = ss.complement(rel.shift(A, lam).ran)
    Nm = ss.complement(rel.shift(A, mu).ran)
    if Nl.dim:
        bound = abs(lam - mu) / c_mu
        ck.value("step bound", max(0.0, ss.inclusion_residual(Nl, Nm) - bound * (1 + 1e-8)))


# -- the extension A_inf and tightness --------------------------------------------------

@law("ainf-adjoint", "(A_inf)* = A* cap (dom A x C^n)")
def _ainf_adjoint(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    Ai = rel.infinity_ext(A)
    Ais = adj(Ai)
    ck.eq("(A_inf)*", Ais, rel.intersect(S, rel.cross(A.dom, full(n))))
    ck.eq("dom (A_inf)*", Ais.dom, ss.intersect(A.dom, S.dom))
    ck.eq("mul (A_inf)*", Ais.mul, S.mul)
    ck.eq("dom A_inf", Ai.dom, A.dom)
    ck.eq("mul A_inf", Ai.mul, ss.sum(A.mul, S.mul))


@law("ainf-tight",
     "A formally domain tight <=> A_inf is; A_inf domain tight <=> dom A = dom A cap dom A*; "
     "A domain tight <=> A_inf domain tight and dom A* in dom A")
def _ainf_tight(rng, n, ck):
    A = draw(rng, n, "formally-domain-tight", "domain-tight", "generic", "operator",
             "symmetric", "selfadjoint", "dissipative")
    S = adj(A)
    Ai = rel.infinity_ext(A)
    ck.iff("(i)", cl.is_formally_domain_tight(A), cl.is_formally_domain_tight(Ai))
    ai_dt = cl.is_domain_tight(Ai)
    ck.iff("(ii)", ai_dt, ss.equal(A.dom, ss.intersect(A.dom, S.dom)))
    dt = cl.is_domain_tight(A)
    ck.iff("(iii)", dt, ai_dt and ss.leq(S.dom, A.dom))
    if dt:
        ck.eq("(A_inf)* = A*", adj(Ai), S)
        ck.eq("A* = (A*)_inf", S, rel.infinity_ext(S))


@law("ainf-marci",
     "A formally domain tight: mul A_inf = mul A*; A_inf = A <=> mul A* = mul A; "
     "A_inf is an operator <=> A densely defined")
def _ainf_marci(rng, n, ck):
    A = draw(rng, n, "formally-domain-tight", "domain-tight", "operator", "dissipative",
             "selfadjoint")
    if not cl.is_formally_domain_tight(A):
        return
    S = adj(A)
    Ai = rel.infinity_ext(A)
    z = zero(n)
    ck.eq("mul A_inf = mul A*", Ai.mul, S.mul)
    ck.iff("A_inf = A <=> mul A* = mul A", rel.equal(Ai, A), ss.equal(S.mul, A.mul))
    ck.eq("A cap ({0} x mul A*) = {0} x mul A", rel.intersect(A, rel.cross(z, S.mul)),
          rel.cross(z, A.mul))
    direct = A.dim + S.mul.dim == Ai.dim
    ck.iff("sum direct <=> A operator", direct, A.mul.dim == 0)
    ck.iff("A_inf operator <=> A densely defined", Ai.mul.dim == 0, A.dom.is_full())


@law("ainf-selfadjoint", "A_inf selfadjoint <=> A symmetric and dom A = dom A cap dom A*")
def _ainf_selfadjoint(rng, n, ck):
    A = draw(rng, n, "symmetric", "symmetric", "selfadjoint", "nonnegative", "generic",
             "formally-domain-tight")
    S = adj(A)
    lhs = cl.is_selfadjoint(rel.infinity_ext(A))
    rhs = cl.is_symmetric(A) and ss.equal(A.dom, ss.intersect(A.dom, S.dom))
    ck.iff("both sides agree", lhs, rhs)


@law("sym-sa", "symmetric, domain tight and mul A* within mul A implies selfadjoint")
def _sym_sa(rng, n, ck):
    A = draw(rng, n, "symmetric", "selfadjoint", "nonnegative")
    S = adj(A)
    if cl.is_symmetric(A) and cl.is_domain_tight(A) and ss.leq(S.mul, A.mul):
        ck.holds("selfadjoint", cl.is_selfadjoint(A))
    ck.iff("symmetric two ways", cl.is_symmetric(A), rel.leq(A, S))


def _extension_of(rng, A: Relation, m: int):
    """An isometry V : C^n -> C^m and a formally domain tight B containing V(A)."""
    n = A.n
    V = gen.rand_unitary(rng, m)[:, :n]
    EA = rel.embed(A, V)
    allowed = ss.complement(ss.image(V, A.mul))
    k = int(rng.integers(0, m - n + 1))
    extra = gen.rand_subspace_of(rng, allowed, min(k, allowed.dim))
    T = gen.rand_complex(rng, m, m)
    B = rel.cw_sum(EA, rel.from_operator(T, extra)) if extra.dim else EA
    return V, B


@law("tight-ext",
     "A domain tight, B formally domain tight extension: dom B cap H = P(dom B*), "
     "B tight and *-tight; same space: B domain tight")
def _tight_ext(rng, n, ck):
    A = gen.domain_tight(rng, n)
    m = n + int(rng.integers(0, 3))
    V, B = _extension_of(rng, A, m)
    if not cl.is_formally_domain_tight(B):
        return
    ranV = ss.column_span(V)
    ck.eq("dom B cap H = P(dom B*)", ss.intersect(B.dom, ranV),
          ss.image(V @ V.conj().T, adj(B).dom))
    ck.holds("tight", cl.is_tight_extension(A, B, V))
    ck.holds("*-tight", cl.is_star_tight_extension(A, B, V))
    if m == n:
        B2 = rel.compress(B, V)
        ck.holds("same-space extension is domain tight", cl.is_domain_tight(B2))
    # converse direction with a generic relation
    C = draw(rng, n, "generic", "formally-domain-tight", "domain-tight")
    EC = rel.embed(C, V)
    ident = ss.equal(ss.intersect(EC.dom, ranV), ss.image(V @ V.conj().T, adj(EC).dom))
    if ident and cl.is_tight_extension(C, EC, V) and cl.is_star_tight_extension(C, EC, V):
        ck.holds("converse: A domain tight", cl.is_domain_tight(C))


@law("range-tight-inv", "range tight <=> inverse domain tight, likewise formally")
def _range_tight_inv(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    if rng.random() < 0.5:
        A = rel.inverse(A)
    Ai = rel.inverse(A)
    ck.iff("range tight", cl.is_range_tight(A), cl.is_domain_tight(Ai))
    ck.iff("formally range tight", cl.is_formally_range_tight(A),
           cl.is_formally_domain_tight(Ai))


@law("class-orth",
     "maximal class member, selfadjoint or normal A: A = A_op (+)^ A_mul with A_op in the "
     "same class on H_A and A_mul selfadjoint in mul A")
def _class_orth(rng, n, ck):
    name = ("dissipative", "accretive", "sectorial", "nonnegative", "selfadjoint",
            "normal")[int(rng.integers(0, 6))]
    A = gen.build(name, rng, n)
    if name in ("selfadjoint", "normal"):
        cls = None
    else:
        cls = name
        alpha = math.pi / 4 if cls == "sectorial" else None
        if not cl.is_maximal(A, cls, alpha):
            return
    d = dec.orthogonal_decompose(A)
    ck.value("reassembly", d.identity_residual)
    op, mp = d.parts
    H = dec.hilbert_part(A)
    if H.dim:
        Bc = rel.compress(op, H.basis)
        ck.holds("A_op densely defined in H_A", Bc.dom.is_full())
        if cls is None:
            pred = cl.is_selfadjoint if name == "selfadjoint" else cl.is_normal
            ck.holds(f"A_op {name} in H_A", pred(Bc))
        else:
            ck.holds(f"A_op {cls} in H_A", cl.in_class(Bc, cls, alpha))
            ck.holds(f"A_op maximal {cls} in H_A", cl.is_maximal(Bc, cls, alpha))
    if A.mul.dim:
        ck.holds("A_mul selfadjoint in mul A",
                 cl.is_selfadjoint(rel.compress(mp, A.mul.basis)))


# -- real and imaginary parts ---------------------------------------------------------

@law("reim",
     "Re A = Re A* = Re A** within (Re A)*, Im A = -Im A* = Im A** within (Im A)*, "
     "mul Re A = mul Im A = mul A + mul A*")
def _reim(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    re, im = dec.real_part(A), dec.imag_part(A)
    re_s, im_s = dec.real_part(S), dec.imag_part(S)
    ck.eq("Re A = Re A*", re, re_s)
    ck.eq("Re A* = Re A**", re_s, dec.real_part(A2(A)))
    ck.sub("Re A in (Re A)*", re, adj(re))
    ck.eq("Im A = -Im A*", im, rel.scalar_mul(-1, im_s))
    ck.eq("-Im A* = Im A**", rel.scalar_mul(-1, im_s), dec.imag_part(A2(A)))
    ck.sub("Im A in (Im A)*", im, adj(im))
    m = ss.sum(A.mul, S.mul)
    ck.eq("mul Re A", re.mul, m)
    ck.eq("mul Im A", im.mul, m)
    ck.eq("dom Re A = dom A cap dom A*", re.dom, ss.intersect(A.dom, S.dom))
    if cl.is_formally_domain_tight(A):
        ck.eq("mul Re A = mul A* (formally domain tight)", re.mul, S.mul)


@law("eenv",
     "Re A within A +^ A*, Im A within -(iA +^ (iA)*); ran Im A = mul(A +^ A*), "
     "ran Re A = mul(-A +^ A*); Re A +- i Im A within Re A +^ ({0} x ran Im A) "
     "within A +^ A*")
def _eenv(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    S = adj(A)
    re, im = dec.real_part(A), dec.imag_part(A)
    W = rel.cw_sum(A, S)
    z = zero(n)
    ck.sub("Re A in A +^ A*", re, W)
    iA = rel.scalar_mul(1j, A)
    Wi = rel.scalar_mul(-1, rel.cw_sum(iA, adj(iA)))
    ck.sub("Im A in -(iA +^ (iA)*)", im, Wi)
    ck.eq("ran Im A = mul(A +^ A*)", im.ran, W.mul)
    ck.eq("ran Re A = mul(-A +^ A*)", re.ran, rel.cw_sum(rel.scalar_mul(-1, A), S).mul)
    R1 = rel.cw_sum(re, rel.cross(z, im.ran))
    ck.sub("Re A +^ ({0} x ran Im A) in A +^ A*", R1, W)
    # the same statement for iA, whose real part is -Im A and imaginary part Re A
    R2 = rel.cw_sum(im, rel.cross(z, re.ran))
    ck.sub("Im A +^ ({0} x ran Re A) in -(iA +^ (iA)*)", R2, Wi)
    for s in (1, -1):
        sg = "+" if s > 0 else "-"
        ck.sub(f"Re A {sg} i Im A", re_plus_i_im(A, s), R1)
        ck.sub(f"Im A {sg} i Re A", rel.op_sum(im, rel.scalar_mul(s * 1j, re)), R2)


@law("fdtight",
     "formally domain tight <=> A within Re A + i Im A <=> (Re A) +^ A* = A +^ A* "
     "<=> dom A = dom B and A within B* for some B")
def _fdtight(rng, n, ck):
    A = draw(rng, n, "formally-domain-tight", "formally-domain-tight", "generic",
             "operator", "domain-tight", "singular")
    S = adj(A)
    fdt = cl.is_formally_domain_tight(A)
    ck.iff("(ii)", fdt, rel.leq(A, re_plus_i_im(A)))
    ck.iff("(iii)", fdt, rel.equal(rel.cw_sum(dec.real_part(A), S), rel.cw_sum(A, S)))
    B = re_plus_i_im(A, -1)
    ck.iff("(iv) with B = Re A - i Im A", fdt,
           ss.equal(A.dom, B.dom) and rel.leq(A, adj(B)))
    ck.iff("(v) with C = A", fdt, rel.leq(A, re_plus_i_im(A)))


@law("rmlem",
     "dom A* within dom A <=> (Re A) +^ A = A +^ A*; if moreover dom A within dom A*, "
     "Re A = Re A* and Im A = -Im A*")
def _rmlem(rng, n, ck):
    A = draw(rng, n, "operator", "domain-tight", "generic", "formally-domain-tight",
             "purely-multivalued", "selfadjoint")
    S = adj(A)
    cond = ss.leq(S.dom, A.dom)
    ck.iff("(i)", cond, rel.equal(rel.cw_sum(dec.real_part(A), A), rel.cw_sum(A, S)))
    if cond and ss.leq(A.dom, S.dom):
        ck.eq("Re A = Re A*", dec.real_part(A), dec.real_part(S))
        ck.eq("Im A = -Im A*", dec.imag_part(A), rel.scalar_mul(-1, dec.imag_part(S)))


@law("reaal",
     "domain tight <=> (Re A) +^ A = (Re A) +^ A* <=> Re A +^ ({0} x ran Im A) = A +^ A*")
def _reaal(rng, n, ck):
    A = draw(rng, n, "domain-tight", "domain-tight", "formally-domain-tight", "generic",
             "operator", "selfadjoint")
    S = adj(A)
    re, im = dec.real_part(A), dec.imag_part(A)
    dt = cl.is_domain_tight(A)
    X1 = rel.cw_sum(re, rel.cross(zero(n), im.ran))
    X2 = rel.cw_sum(re, A)
    X3 = rel.cw_sum(re, S)
    X4 = rel.cw_sum(A, S)
    ck.iff("(ii)", dt, rel.equal(X2, X3))
    ck.iff("(iii)", dt, rel.equal(X1, X4))
    if dt:
        ck.eq("chain 1", X1, X2)
        ck.eq("chain 2", X2, X3)
        ck.eq("chain 3", X3, X4)


@law("cart",
     "formally domain tight <=> A = A1 + i A2 with symmetric A1, A2 <=> A_inf = Re A + i Im A")
def _cart(rng, n, ck):
    A = draw(rng, n, "formally-domain-tight", "formally-domain-tight", "domain-tight",
             "generic", "operator")
    fdt = cl.is_formally_domain_tight(A)
    ck.iff("(iii)", fdt, rel.equal(rel.infinity_ext(A), re_plus_i_im(A)))
    try:
        d = dec.cartesian_components(A)
    except dec.NotFormallyDomainTight as exc:
        ck.holds("refused although formally domain tight", not fdt)
        ck.holds("witness in dom A", ss.contains(A.dom, exc.witness))
        ck.holds("witness outside dom A*", not ss.contains(adj(A).dom, exc.witness))
        return
    ck.holds("decomposed although not formally domain tight", fdt)
    a1, a2 = d.parts
    ck.value("A = A1 + i A2", d.identity_residual)
    ck.value("A_inf = Re A + i Im A", d.extra["infinity_residual"])
    ck.holds("A1 symmetric", cl.is_symmetric(a1))
    ck.holds("A2 symmetric", cl.is_symmetric(a2))


@law("cart-plus",
     "domain tight <=> A_inf = Re A + i Im A and (A*)_inf = Re A - i Im A "
     "<=> A within Re A + i Im A and A* = Re A - i Im A")
def _cart_plus(rng, n, ck):
    A = draw(rng, n, "domain-tight", "domain-tight", "formally-domain-tight", "generic",
             "operator")
    S = adj(A)
    dt = cl.is_domain_tight(A)
    plus, minus = re_plus_i_im(A), re_plus_i_im(A, -1)
    ck.iff("(ii)", dt, rel.equal(rel.infinity_ext(A), plus)
           and rel.equal(rel.infinity_ext(S), minus))
    ck.iff("(iii)", dt, rel.leq(A, plus) and rel.equal(S, minus))
    try:
        dec.cartesian_components(A)
        has_cart = True
    except dec.NotFormallyDomainTight:
        has_cart = False
    ck.iff("(iv)", dt, has_cart and rel.equal(S, minus))


@law("cart-plusplus",
     "domain tight with mul A = mul A* <=> A = Re A + i Im A and A* = Re A - i Im A "
     "<=> A = A1 + i A2 and A* = A1 - i A2")
def _cart_plusplus(rng, n, ck):
    A = draw(rng, n, "domain-tight", "domain-tight", "formally-domain-tight", "generic",
             "operator")
    S = adj(A)
    lhs = cl.is_domain_tight(A) and ss.equal(A.mul, S.mul)
    ck.iff("(ii)", lhs, rel.equal(A, re_plus_i_im(A))
           and rel.equal(S, re_plus_i_im(A, -1)))
    try:
        a1, a2 = dec.cartesian_components(A).parts
        iii = (rel.equal(A, rel.op_sum(a1, rel.scalar_mul(1j, a2)))
               and rel.equal(S, rel.op_sum(a1, rel.scalar_mul(-1j, a2))))
    except dec.NotFormallyDomainTight:
        iii = False
    ck.iff("(iii)", lhs, iii)
    if lhs:
        ck.eq("A* = Re A - i Im A", S, re_plus_i_im(A, -1))


@law("dualpair",
     "with A = A1 + i A2 and B = A1 - i A2: dom B = dom A, B within A*, A within B*, "
     "A1 cap (dom A x C^n) within Re A")
def _dualpair(rng, n, ck):
    A = draw(rng, n, "formally-domain-tight", "domain-tight", "dissipative", "selfadjoint")
    S = adj(A)
    a1, a2 = dec.cartesian_components(A).parts
    B = rel.op_sum(a1, rel.scalar_mul(-1j, a2))
    ck.eq("dom B = dom A", B.dom, A.dom)
    ck.sub("B in A*", B, S)
    ck.sub("A in B*", A, adj(B))
    ck.holds("B formally domain tight", cl.is_formally_domain_tight(B))
    cut = rel.cross(A.dom, full(n))
    ck.sub("A1 cap (dom A x C^n) in Re A", rel.intersect(a1, cut), dec.real_part(A))
    ck.sub("A2 cap (dom A x C^n) in Im A", rel.intersect(a2, cut), dec.imag_part(A))
    for s in (1, -1):
        ck.sub("A1 +- i A2 in Re A +- i Im A",
               rel.op_sum(a1, rel.scalar_mul(s * 1j, a2)), re_plus_i_im(A, s))


# -- statements that collapse in finite dimension -------------------------------------

@law("degenerate-findim",
     "closedness statements for domains, ranges and sums; dom A* = C^n <=> A bounded",
     degenerate=True)
def _degenerate(rng, n, ck):
    A = draw(rng, n, *ALL_PROFILES)
    B = draw(rng, n, *ALL_PROFILES)
    S, SS = adj(A), A2(A)
    P = S.dom.projector
    Q = A.dom.projector
    ck.sub("ran P A** in dom A*", rel.product(rel.from_operator(P), SS).ran, S.dom)
    ck.sub("ran Q A* in dom A**", rel.product(rel.from_operator(Q), S).ran, SS.dom)
    ck.sub("P'(dom A**) in ran A*", ss.image(S.ran.projector, SS.dom), S.ran)
    ck.sub("Q'(dom A*) in ran A**", ss.image(A.ran.projector, S.dom), SS.ran)
    # sums of closed relations and of their adjoints are both closed
    W = rel.cw_sum(A, B)
    ck.eq("A +^ B closed", A2(W), W)
    Ws = rel.cw_sum(S, adj(B))
    ck.eq("A* +^ B* closed", A2(Ws), Ws)
    bounded = A.mul.dim == 0
    ck.iff("dom A* = C^n <=> operator", S.dom.is_full(), bounded)
    ck.iff("ran A** in dom A* <=> operator", ss.leq(SS.ran, S.dom), bounded)
    sing = dec.singular_part(A)
    ck.iff("A_sing operator <=> A_sing = dom A x {0}", sing.mul.dim == 0,
           rel.equal(sing, rel.cross(A.dom, zero(n))))
    ck.holds("A_reg is bounded", dec.regular_part(A).mul.dim == 0)
    op = dec.operator_part(A)
    ck.eq("A_reg = A_op", dec.regular_part(A), op)


# -- running -----------------------------------------------------------------------

def trial_seed(master: int, law_id: str, index: int) -> int:
    """Fixed mixing of (master seed, law id, trial index) into a 64-bit seed."""
    ss_ = np.random.SeedSequence([int(master) & 0xFFFFFFFFFFFFFFFF,
                                  zlib.crc32(law_id.encode()), int(index)])
    return int(ss_.generate_state(1, np.uint64)[0])


def get_law(law_id: str) -> Law:
    try:
        return LAWS[law_id]
    except KeyError:
        raise UnknownLaw(law_id) from None


def run_trial(law_id: str, seed: int, n: int) -> tuple[float, str]:
    """Run one trial; returns (residual, label of the worst check)."""
    lw = get_law(law_id)
    ck = Check()
    try:
        lw.body(np.random.default_rng(seed), n, ck)
    except Exception as exc:  # a crash inside a law is a failure, not an abort
        return math.inf, f"{type(exc).__name__}: {exc}"
    return ck.residual, ck.label


def _dims(n) -> list[int]:
    if isinstance(n, (int, np.integer)):
        return [int(n)]
    dims = [int(k) for k in n]
    if not dims:
        raise ValueError("no dimensions given")
    return dims


def run_law(law_id: str, trials: int, n: int | Sequence[int], seed: int,
            tol: float = EQ_TOL) -> LawReport:
    """Run ``trials`` trials; trial i uses dimension dims[i % len(dims)]."""
    lw = get_law(law_id)
    dims = _dims(n)
    if min(dims) < 2:
        raise ValueError("laws need n >= 2")
    report = LawReport(law_id, lw.anchor, trials,
                       note=DEGENERATE_NOTE if lw.degenerate else "")
    for i in range(trials):
        s = trial_seed(seed, law_id, i)
        ni = dims[i % len(dims)]
        r, label = run_trial(law_id, s, ni)
        report.max_residual = max(report.max_residual, r)
        if not r <= tol:
            report.failures.append(Failure(s, ni, r, label))
    return report


def _run_one(args):
    return run_law(*args)


def run_all(trials: int, n, seed: int, laws: Iterable[str] | None = None,
            workers: int = 1) -> list[LawReport]:
    """Run every registered law (or the given ids), in registry order."""
    ids = list(LAWS) if laws is None else list(laws)
    for i in ids:
        get_law(i)
    jobs = [(i, trials, _dims(n), seed) for i in ids]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
