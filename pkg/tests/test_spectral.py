import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import E1, nilpotent
from relcalc import relation as rel
from relcalc import spectral as sp
from relcalc import subspace as ss
from relcalc.laws import generators as gen
from relcalc.subspace import Subspace

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 6)
PROFILES = sorted(gen.PROFILES)


def draw(seed, n, name=None):
    rng = np.random.default_rng(seed)
    if name is None:
        name = PROFILES[int(rng.integers(0, len(PROFILES)))]
    return gen.build(name, rng, n)


def pencil_smin(A, lam):
    """Smallest singular value of G - lam F.

    (G - lam F) z = 0 with F z = 0 forces z = 0, so lam is an eigenvalue
    exactly when this vanishes (for a graph basis with at most n columns).
    """
    M = A.G - lam * A.F
    if M.shape[1] == 0:
        return math.inf
    if M.shape[1] > M.shape[0]:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def unit_coords(A, rng):
    """Graph coordinates z with ||F z|| = 1."""
    while True:
        z = gen.rand_complex(rng, A.dim)
        nf = np.linalg.norm(A.F @ z)
        if nf > 1e-3:
            return z / nf


def with_mul(M, k):
    """graph M on C^m together with {0} x C^k, placed orthogonally."""
    return rel.cw_orth_sum(rel.from_operator(M), rel.cross(Subspace.zero(k), Subspace.full(k)))


# -- eigenvalues -------------------------------------------------------------------

def test_eigenvalue_examples(a_sd):
    rep = sp.eigenvalues(rel.from_operator(np.diag([2.0, 3.0])))
    assert np.allclose(sorted(rep.values().real), [2, 3]) and rep.mul_dim == 0
    rep = sp.eigenvalues(a_sd)
    assert len(rep.eigenvalues) == 1 and abs(rep.eigenvalues[0][0]) <= 1e-12
    assert rep.mul_dim == 1
    assert rel.contains(a_sd, E1, 0 * E1)


def test_eigenvalues_with_hidden_mul(rng):
    lams = np.array([1.5, -2 + 1j, 0.25j])
    A = with_mul(np.diag(lams), 2)
    U = gen.rand_unitary(rng, 5)
    B = rel.embed(A, U)
    rep = sp.eigenvalues(B)
    assert rep.mul_dim == 2 and not rep.every_point
    got = sorted(rep.values(), key=lambda z: (z.real, z.imag))
    assert np.allclose(got, sorted(lams, key=lambda z: (z.real, z.imag)), atol=1e-10)


@given(seeds, sizes)
def test_eigenvalues_of_matrices_match_numpy(seed, n):
    rng = np.random.default_rng(seed)
    M = gen.rand_complex(rng, n, n)
    rep = sp.eigenvalues(rel.from_operator(M))
    ref = np.linalg.eigvals(M)
    assert len(rep.eigenvalues) == n
    for z in ref:
        assert np.min(np.abs(rep.values() - z)) <= 1e-8 * max(1, abs(z))


@given(seeds, sizes)
def test_eigenvalues_are_pencil_roots(seed, n):
    A = draw(seed, n)
    rep = sp.eigenvalues(A)
    if rep.every_point:
        # singular pencil: G - lam F has a kernel everywhere
        for lam in (0.3, -1.7j, 2 + 2j):
            assert pencil_smin(A, lam) <= 1e-8
        return
    scale = np.linalg.norm(A.G, 2) + np.linalg.norm(A.F, 2) if A.dim else 1
    for lam, _ in rep.eigenvalues:
        assert pencil_smin(A, lam) <= 1e-6 * scale * max(1, abs(lam))
    # points away from every eigenvalue are not roots
    rng = np.random.default_rng(seed)
    for lam in gen.rand_complex(rng, 5) * 3:
        if all(abs(lam - w) > 0.1 for w in rep.values()):
            assert pencil_smin(A, lam) > 1e-10


@given(seeds, sizes)
def test_eigenvalues_of_inverse(seed, n):
    A = draw(seed, n)
    rep, inv = sp.eigenvalues(A), sp.eigenvalues(rel.inverse(A))
    assert inv.mul_dim == A.ker.dim
    if rep.every_point or inv.every_point:
        return
    expected = [1 / z for z in rep.values() if abs(z) > 1e-6]
    got = [z for z in inv.values() if abs(z) > 1e-6]
    assert len(got) == len(expected)
    for z in expected:
        assert np.min(np.abs(np.array(got) - z)) <= 1e-6 * max(1, abs(z))


@given(seeds, sizes)
def test_eigenvalues_lie_in_numerical_range(seed, n):
    # each eigenvalue is the value of its own eigen-element
    A = draw(seed, n)
    rep = sp.eigenvalues(A)
    if rep.every_point:
        return
    for lam, _ in rep.eigenvalues:
        K = oracles.null(A.G - lam * A.F, rcond=1e-7)
        assert K.shape[1] >= 1
        assert abs(sp.rayleigh(A, K[:, 0]) - lam) <= 1e-6 * max(1, abs(lam))


# -- regularity constant and defect ---------------------------------------------------

def test_regularity_constant_examples():
    I = rel.identity_on(Subspace.full(3))
    assert sp.regularity_constant(I, 0) == pytest.approx(1, abs=1e-12)
    assert sp.regularity_constant(rel.from_operator(np.diag([2.0, 3.0])), 2) == 0.0
    assert sp.regularity_constant(rel.zero_relation(2), 0) == math.inf


def test_regularity_constant_of_nilpotent_against_sampling():
    A = nilpotent()
    c = sp.regularity_constant(A, 1)
    M = np.array([[0, 1], [0, 0]]) - np.eye(2)
    assert c == pytest.approx(np.linalg.svd(M, compute_uv=False)[-1], abs=1e-12)
    rng = np.random.default_rng(7)
    Z = gen.rand_complex(rng, A.dim, 100_000)
    ratios = np.linalg.norm((A.G - A.F) @ Z, axis=0) / np.linalg.norm(A.F @ Z, axis=0)
    assert ratios.min() >= c - 1e-12
    assert ratios.min() <= c + 1e-3


@given(seeds, sizes)
def test_regularity_constant_matches_sampling_bound(seed, n):
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    if A.dom.dim == 0:
        return
    lam = complex(*rng.standard_normal(2))
    c = sp.regularity_constant(A, lam, snap=False)
    Z = gen.rand_complex(rng, A.dim, 2000)
    nf = np.linalg.norm(A.F @ Z, axis=0)
    keep = nf > 1e-8
    ratios = np.linalg.norm((A.G - lam * A.F) @ Z[:, keep], axis=0) / nf[keep]
    assert ratios.min() >= c - 1e-9


def test_defect_examples():
    A = rel.identity_on(ss.span([E1]))
    for lam in (0, 2, -1j, 0.5 + 0.5j):
        assert sp.defect(A, lam) == 1
    assert sp.defect(A, 1) == 2
    assert sp.in_resolvent_set(rel.from_operator(np.diag([2.0, 3.0])), 0)
    P = rel.cross(Subspace.zero(3), Subspace.full(3))
    for lam in (0, 1, 1j, -4):
        assert sp.in_resolvent_set(P, lam)


@given(seeds, sizes)
def test_defect_is_constant_off_the_spectrum(seed, n):
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    rep = sp.eigenvalues(A)
    if rep.every_point:
        return
    eig = rep.values()
    center = complex(*rng.standard_normal(2)) * 3
    pts = center + 0.5 * gen.rand_complex(rng, 100)
    pts = [p for p in pts if eig.size == 0 or np.min(np.abs(eig - p)) >= 0.1]
    assert len({sp.defect(A, p) for p in pts}) <= 1


@given(seeds, sizes)
def test_regular_type_set_is_open(seed, n):
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    mu = complex(*rng.standard_normal(2))
    c = sp.regularity_constant(A, mu)
    if not (0 < c < math.inf):
        return
    for _ in range(10):
        lam = mu + 0.49 * c * cmath.exp(2j * math.pi * rng.random())
        assert sp.regularity_constant(A, lam) > 0
        assert sp.resolvent_norm_bound_check(A, mu, lam)


def test_resolvent_estimate_examples(rng):
    I = rel.identity_on(Subspace.full(2))
    assert sp.resolvent_norm_bound_check(I, 0, 0.5)
    A = gen.operator(rng, 4)
    mu = 0.1 + 50j
    assert sp.regularity_constant(A, mu) > 0
    assert sp.resolvent_norm_bound_check(A, mu, mu)
    with pytest.raises(ValueError):
        sp.resolvent_norm_bound_check(I, 1, 1.1)
    with pytest.raises(ValueError):
        sp.resolvent_norm_bound_check(I, 0, 5)


# -- numerical range -------------------------------------------------------------------

def test_nrange_examples():
    pts = sp.nrange_sample(rel.from_operator(np.eye(2)), 50, 0)
    assert np.allclose(pts, 1, atol=1e-14)
    pts = sp.nrange_sample(nilpotent(), 10_000, 1)
    assert np.max(np.abs(pts)) <= 0.5 + 1e-12
    assert np.max(np.abs(pts)) >= 0.5 - 1e-3
    P = rel.cross(Subspace.zero(2), Subspace.full(2))
    assert np.array_equal(sp.nrange_sample(P, 10, 0), [0])
    with pytest.raises(ValueError):
        sp.nrange_sample(nilpotent(), -1, 0)


def test_nrange_is_deterministic(rng):
    A = gen.generic(rng, 4)
    a, b = sp.nrange_sample(A, 100, 9), sp.nrange_sample(A, 100, 9)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sp.nrange_sample(A, 100, 10))


@given(seeds, sizes)
def test_nrange_of_inverse_is_conjugate_value_map(seed, n):
    # {f, f'} in A gives {f', f} in A^-1 with value conj((f', f)) ||f||^2 / ||f'||^2
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    if A.dim == 0:
        return
    for _ in range(5):
        e = rel.element(A, gen.rand_complex(rng, A.dim))
        nf, ng = np.vdot(e.f, e.f).real, np.vdot(e.f_prime, e.f_prime).real
        if nf < 1e-6 or ng < 1e-6:
            continue
        w = np.vdot(e.f, e.f_prime) / nf
        w_inv = np.vdot(e.f_prime, e.f) / ng
        assert abs(w_inv - np.conj(w) * nf / ng) <= 1e-10 * max(1, abs(w_inv))
        assert rel.contains(rel.inverse(A), e.f_prime, e.f)


@given(seeds, sizes)
def test_nrange_of_infinity_extension_matches(seed, n):
    # A_inf adds {0, m} with m in mul A* = (dom A)^perp, so (f' + m, f) = (f', f)
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    if A.dom.dim == 0:
        return
    S, Ai = rel.adjoint(A), rel.infinity_ext(A)
    assert ss.opening(Ai.dom, A.dom) <= 1e-9
    for _ in range(5):
        z = unit_coords(A, rng)
        e = rel.element(A, z)
        m = S.mul.basis @ gen.rand_complex(rng, S.mul.dim)
        assert rel.contains(Ai, e.f, e.f_prime + m)
        assert abs(np.vdot(e.f, e.f_prime + m) - sp.rayleigh(A, z)) <= 1e-9 * max(1, np.linalg.norm(m))


def test_convex_witness_examples():
    A = rel.from_operator(np.diag([0.0, 1.0]))
    # graph coordinates of (e1, 0) and (e2, e2)
    z1 = A.basis.conj().T @ np.array([1, 0, 0, 0])
    z2 = A.basis.conj().T @ np.array([0, 1, 0, 1])
    e = sp.nrange_convex_witness(A, z1, z2, 0.5)
    assert abs(np.vdot(e.f, e.f_prime) - 0.5) <= 1e-8
    assert np.linalg.norm(e.f) == pytest.approx(1)
    assert np.allclose(np.abs(e.f), [1 / math.sqrt(2)] * 2, atol=1e-8)
    # endpoints: u = 1 gives the first value, u = 0 the second
    assert abs(np.vdot(sp.nrange_convex_witness(A, z1, z2, 1.0).f,
                       sp.nrange_convex_witness(A, z1, z2, 1.0).f_prime)) <= 1e-10
    e0 = sp.nrange_convex_witness(A, z1, z2, 0.0)
    assert abs(np.vdot(e0.f, e0.f_prime) - 1) <= 1e-10


def test_convex_witness_errors():
    A = rel.from_operator(np.eye(2))
    z = A.basis.conj().T @ np.array([1, 0, 1, 0])
    with pytest.raises(ValueError):
        sp.nrange_convex_witness(A, z, z, 0.5)
    with pytest.raises(ValueError):
        sp.nrange_convex_witness(A, z, z, 1.5)
    with pytest.raises(ValueError):
        sp.nrange_convex_witness(A, 2 * z, z, 0.5)


@given(seeds, sizes, st.floats(0, 1))
def test_convex_witness_hits_segment(seed, n, u):
    rng = np.random.default_rng(seed)
    A = draw(seed, n)
    if A.dom.dim == 0:
        return
    z1, z2 = unit_coords(A, rng), unit_coords(A, rng)
    l1, l2 = sp.rayleigh(A, z1), sp.rayleigh(A, z2)
    if abs(l1 - l2) <= 1e-6:
        return
    e = sp.nrange_convex_witness(A, z1, z2, u)
    assert abs(np.linalg.norm(e.f) - 1) <= 1e-8
    assert abs(np.vdot(e.f, e.f_prime) - (u * l1 + (1 - u) * l2)) <= 1e-8 * max(1, abs(l1), abs(l2))
    assert rel.contains(A, e.f, e.f_prime)
