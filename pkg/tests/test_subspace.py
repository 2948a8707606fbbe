import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

import oracles
from relcalc import subspace as ss
from relcalc.subspace import DimensionError, Subspace


def rand_sub(seed, m, d=None):
    rng = np.random.default_rng(seed)
    if d is None:
        d = int(rng.integers(0, m + 1))
    M = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    return ss.column_span(M)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)


# -- examples -----------------------------------------------------------------

def test_span_single_vector_is_e1():
    S = ss.span([(1, 0)])
    assert S.dim == 1
    assert np.allclose(np.abs(S.basis[:, 0]), [1, 0])


def test_span_dependent_vectors_collapse():
    assert ss.span([(1, 0), (2, 0)]).dim == 1


def test_span_full_rank_matches_exact_rank():
    vecs = [(1, 1), (1, -1)]
    assert ss.span(vecs).dim == oracles.exact_rank(vecs) == 2


def test_span_rejects_mismatched_lengths():
    with pytest.raises(DimensionError):
        ss.span([(1, 0), (1, 0, 0)])


def test_complement_examples():
    e1 = ss.span([(1, 0)])
    assert ss.equal(ss.complement(e1), ss.span([(0, 1)]))
    assert ss.complement(Subspace.full(3)).dim == 0
    diag = ss.span([(1 / math.sqrt(2), 1 / math.sqrt(2))])
    (kernel,) = oracles.exact_nullspace([[1, 1]])
    assert ss.equal(ss.complement(diag), ss.span([kernel]))


def test_sum_and_intersect_examples():
    e1, e2 = ss.span([(1, 0)]), ss.span([(0, 1)])
    assert ss.sum(e1, e2).is_full()
    S = rand_sub(3, 4, 2)
    assert ss.equal(ss.intersect(S, S), S)
    plane = ss.span([(1, 0, 0), (0, 1, 0)])
    line = ss.span([(0, 1, 1)])
    # a e1 + b e2 = c (0, 1, 1) only for a = b = c = 0
    assert oracles.exact_nullspace([[1, 0, 0], [0, 1, -1], [0, 0, -1]]) == []
    assert ss.intersect(plane, line).dim == 0


def test_ambient_mismatch_raises():
    with pytest.raises(DimensionError):
        ss.sum(Subspace.full(2), Subspace.full(3))
    with pytest.raises(DimensionError):
        ss.opening(Subspace.full(2), Subspace.zero(3))


def test_projector_examples():
    assert np.array_equal(Subspace.zero(3).projector, np.zeros((3, 3)))
    assert not ss.contains(ss.span([(1, 0)]), np.array([1, 1]))
    v = np.array([1, 1]) / math.sqrt(2)
    P = ss.span([v]).projector
    assert np.allclose(P, np.outer(v, v.conj()))
    assert np.allclose(P, 0.5 * np.ones((2, 2)))


def test_opening_examples():
    S = rand_sub(5, 4, 2)
    assert ss.opening(S, S) == pytest.approx(0, abs=1e-15)
    e1, e2 = ss.span([(1, 0)]), ss.span([(0, 1)])
    assert ss.opening(e1, e2) == pytest.approx(1)
    d = ss.span([(1, 1)])
    expected = oracles.gap_eig(e1.basis, d.basis)
    assert expected == pytest.approx(math.sqrt(2) / 2)
    assert ss.opening(e1, d) == pytest.approx(expected, abs=1e-12)


def test_zero_subspace_has_empty_basis():
    Z = Subspace.zero(4)
    assert Z.basis.shape == (4, 0)
    assert ss.span([], m=4).dim == 0


# -- properties ---------------------------------------------------------------

@given(seeds, seeds, dims)
def test_opening_invariant_under_complements(s1, s2, m):
    S, T = rand_sub(s1, m), rand_sub(s2, m)
    a = ss.opening(S, T)
    b = ss.opening(ss.complement(S), ss.complement(T))
    assert abs(a - b) <= 1e-9


@given(seeds, seeds, dims)
def test_opening_matches_sup_formula_and_principal_angles(s1, s2, m):
    S, T = rand_sub(s1, m), rand_sub(s2, m)
    def sup(X, Y):
        if X.dim == 0:
            return 0.0
        R = X.basis - Y.projector @ X.basis
        return float(np.linalg.svd(R, compute_uv=False)[0])
    th = ss.opening(S, T)
    assert abs(th - max(sup(S, T), sup(T, S))) <= 1e-8
    assert abs(th - oracles.gap(S.basis, T.basis)) <= 1e-8
    assert abs(th - ss.opening(T, S)) <= 1e-12
    assert 0.0 <= th <= 1.0


@given(seeds, dims)
def test_small_opening_forces_equal_dimension(s1, m):
    rng = np.random.default_rng(s1)
    S = rand_sub(s1, m)
    E = 1e-3 * (rng.standard_normal((m, S.dim)) + 1j * rng.standard_normal((m, S.dim)))
    T = ss.column_span(S.basis + E)
    if ss.opening(S, T) < 1:
        assert S.dim == T.dim


@given(seeds, seeds, dims)
def test_de_morgan_and_dimension_formula(s1, s2, m):
    S, T = rand_sub(s1, m), rand_sub(s2, m)
    lhs = ss.complement(ss.sum(S, T))
    rhs = ss.intersect(ss.complement(S), ss.complement(T))
    assert ss.opening(lhs, rhs) <= 1e-8
    assert S.dim + T.dim == ss.sum(S, T).dim + ss.intersect(S, T).dim


@given(seeds, seeds, dims)
def test_intersection_matches_kernel_oracle(s1, s2, m):
    rng = np.random.default_rng(s1)
    # force a common part so the intersection is usually nonzero
    C = rand_sub(s2, m, int(rng.integers(0, m + 1)))
    S = ss.sum(C, rand_sub(s1 + 1, m, int(rng.integers(0, m + 1))))
    T = ss.sum(C, rand_sub(s1 + 2, m, int(rng.integers(0, m + 1))))
    ref = oracles.intersection(S.basis, T.basis)
    assert ss.opening(ss.intersect(S, T), ss.column_span(ref)) <= 1e-8


@given(seeds, dims)
def test_projector_hermitian_idempotent(s1, m):
    S = rand_sub(s1, m)
    P = S.projector
    assert np.allclose(P, P.conj().T, atol=1e-12)
    assert np.allclose(P @ P, P, atol=1e-12)
    assert np.allclose(S.basis.conj().T @ S.basis, np.eye(S.dim), atol=1e-12)
    assert ss.complement(S).dim == m - S.dim
    assert ss.sum(S, ss.complement(S)).is_full()


@given(hnp.arrays(np.int64, st.tuples(st.integers(1, 5), st.integers(1, 5)),
                  elements=st.integers(-2, 2)))
def test_span_rank_of_integer_sets_is_exact(M):
    vecs = [row for row in M]
    assert ss.span(vecs).dim == oracles.exact_rank(vecs)


@given(seeds, dims)
def test_leq_and_contains_agree(s1, m):
    rng = np.random.default_rng(s1)
    T = rand_sub(s1, m)
    S = ss.column_span(T.basis @ rng.standard_normal((T.dim, max(T.dim - 1, 0))))
    assert ss.leq(S, T)
    assert all(ss.contains(T, v) for v in S.basis.T)
    if not T.is_full():
        w = ss.complement(T).basis[:, 0]
        assert not ss.contains(T, w)
        assert not ss.leq(ss.sum(S, ss.span([w])), T)
