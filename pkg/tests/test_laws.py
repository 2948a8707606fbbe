import numpy as np
import pytest

from conftest import E1, Z2, make_a_sd, nilpotent, zero_on_e1
from relcalc import classify as cl
from relcalc import decompose as dc
from relcalc import relation as rel
from relcalc import subspace as ss
from relcalc.laws import (LAWS, GenerationError, GenProfile, UnknownLaw, generate,
                          run_all, run_law, run_trial, trial_seed)
from relcalc.laws import generators as gen
from relcalc.laws.registry import DEGENERATE_NOTE, re_plus_i_im

CERTIFIERS = {
    "generic": lambda A: True,
    "operator": lambda A: A.mul.dim == 0,
    "symmetric": cl.is_symmetric,
    "selfadjoint": cl.is_selfadjoint,
    "dissipative": cl.is_dissipative,
    "accretive": cl.is_accretive,
    "nonnegative": cl.is_nonnegative,
    "sectorial": lambda A: cl.is_sectorial(A, np.pi / 4),
    "singular": cl.is_singular,
    "purely-multivalued": lambda A: A.dom.dim == 0,
    "formally-domain-tight": cl.is_formally_domain_tight,
    "domain-tight": cl.is_domain_tight,
    "normal": cl.is_normal,
}


def dom_meets_mul():
    """span{(e1, 0), (0, e1)}: dom A = mul A = span e1, so dom A* = span e2."""
    return rel.from_graph([np.r_[E1, Z2], np.r_[Z2, E1]], 2)


# -- generators ----------------------------------------------------------------------

def test_every_profile_has_a_certifier():
    assert set(CERTIFIERS) == set(gen.PROFILES)


@pytest.mark.parametrize("name", sorted(gen.PROFILES))
def test_generated_relations_pass_their_predicate(name):
    for seed in range(25):
        n = 1 + seed % 6
        A = generate(GenProfile(name, n, seed=seed))
        assert A.n == n
        assert CERTIFIERS[name](A)


def test_selfadjoint_example_and_determinism():
    A = generate(GenProfile("selfadjoint", 3, seed=7))
    assert cl.is_selfadjoint(A)
    B = generate(GenProfile("selfadjoint", 3, seed=7))
    assert np.array_equal(A.basis, B.basis)
    assert rel.opening(A, B) == 0.0


def test_symmetric_with_small_graph_is_rarely_selfadjoint():
    hits = 0
    for seed in range(100):
        A = generate(GenProfile("symmetric", 4, graph_dim=2, seed=seed))
        assert cl.is_symmetric(A) and A.dim == 2
        hits += not cl.is_selfadjoint(A)
    assert hits / 100 > 0.9


def test_infeasible_profiles_are_rejected():
    with pytest.raises(ValueError):
        generate(GenProfile("selfadjoint", 3, graph_dim=2))
    with pytest.raises(ValueError):
        generate(GenProfile("operator", 3, graph_dim=4))
    with pytest.raises(ValueError):
        generate(GenProfile("generic", 0))
    with pytest.raises(KeyError):
        generate(GenProfile("hermitian", 3))
    assert issubclass(GenerationError, RuntimeError)


# -- registry ------------------------------------------------------------------------

EXPECTED_IDS = {
    "adjoint-duality", "cw-adjoint", "opsum-adjoint", "product-adjoint",
    "projection-product", "dom-ran-sum", "canonical", "singular-equiv",
    "componentwise-unique", "reglem-equiv", "maxpart", "orth-iff", "adjoint-orth-iff",
    "opstar-commute", "mulba", "convexity", "nr-mulinc", "maximal-mul", "resolvent-est",
    "defect-const", "ainf-adjoint", "ainf-tight", "ainf-marci", "ainf-selfadjoint",
    "sym-sa", "reim", "eenv", "fdtight", "rmlem", "reaal", "cart", "cart-plus",
    "cart-plusplus", "dualpair", "class-orth", "tight-ext", "range-tight-inv",
    "degenerate-findim",
}


def test_registry_contains_listed_laws():
    assert EXPECTED_IDS <= set(LAWS)
    for lw in LAWS.values():
        assert lw.anchor


def test_named_law_examples():
    rep = run_law("adjoint-duality", 100, 5, 42)
    assert rep.passed and rep.trials == 100 and rep.failures == []
    assert rep.max_residual <= 1e-8
    assert run_law("cart-plusplus", 100, 4, 1).passed


def test_unknown_law():
    with pytest.raises(UnknownLaw):
        run_law("nosuchlaw", 1, 3, 0)
    with pytest.raises(UnknownLaw):
        run_all(1, 3, 0, laws=["canonical", "nosuchlaw"])
    with pytest.raises(ValueError):
        run_law("canonical", 1, 1, 0)


def test_degenerate_laws_are_labelled():
    rep = run_law("degenerate-findim", 5, 3, 0)
    assert rep.passed and rep.note == DEGENERATE_NOTE
    assert run_law("canonical", 2, 3, 0).note == ""


def test_trial_seeds_are_fixed_and_distinct():
    a = trial_seed(42, "canonical", 0)
    assert a == trial_seed(42, "canonical", 0)
    others = {trial_seed(42, "canonical", 1), trial_seed(43, "canonical", 0),
              trial_seed(42, "maxpart", 0)}
    assert a not in others and len(others) == 3


def test_replay_is_bit_for_bit():
    for law_id in ("canonical", "convexity", "cart"):
        s = trial_seed(7, law_id, 3)
        assert run_trial(law_id, s, 4) == run_trial(law_id, s, 4)


def test_failures_capture_replayable_seeds(monkeypatch):
    # a law body that fails on some seeds; the report must point at them exactly
    from relcalc.laws import registry

    def body(rng, n, ck):
        ck.value("coin", float(rng.random() < 0.5))

    monkeypatch.setitem(registry.LAWS, "coin", registry.Law("coin", "coin flip", body))
    rep = run_law("coin", 40, [2, 3], 5)
    assert not rep.passed and rep.failures
    for f in rep.failures:
        assert run_trial("coin", f.seed, f.n) == (f.residual, f.witness)


def test_short_run_of_every_law():
    reports = run_all(10, [2, 3, 4, 5, 6], 2024)
    bad = [(r.law_id, r.failures[:1]) for r in reports if not r.passed]
    assert not bad
    assert [r.law_id for r in reports] == list(LAWS)


def test_run_all_concurrent_matches_serial():
    ids = ["canonical", "convexity", "eenv"]
    a = run_all(4, [2, 3], 9, laws=ids)
    b = run_all(4, [2, 3], 9, laws=ids, workers=2)
    assert [(r.law_id, r.max_residual) for r in a] == [(r.law_id, r.max_residual) for r in b]


# -- negative controls: a fixed fixture where the hypothesis fails must also fail
#    the conclusion side of the biconditional -----------------------------------------

def test_control_fdtight():
    A = dom_meets_mul()
    assert not cl.is_formally_domain_tight(A)
    assert not rel.leq(A, re_plus_i_im(A))
    S = rel.adjoint(A)
    assert not rel.equal(rel.cw_sum(dc.real_part(A), S), rel.cw_sum(A, S))
    with pytest.raises(dc.NotFormallyDomainTight):
        dc.cartesian_components(A)


def test_control_orth_iff():
    A = dom_meets_mul()
    assert not ss.leq(A.mul, rel.adjoint(A).mul)
    with pytest.raises(dc.NotOrthogonal):
        dc.orthogonal_decompose(A)


def test_control_adjoint_orth_iff():
    A = zero_on_e1()  # mul A* = span e2 but mul A** = {0}
    assert not ss.leq(rel.adjoint(A).mul, dc.double_adjoint(A).mul)
    assert not dc.adjoint_decompose(A).extra["orthogonal"]


def test_control_singular_equiv():
    A = nilpotent()
    S = rel.adjoint(A)
    assert not cl.is_singular(A)
    assert not rel.equal(S, rel.cross(S.dom, S.mul))
    assert not ss.equal(S.dom, S.ker)
    assert cl.is_singular(make_a_sd())


def test_control_ainf_selfadjoint():
    A = nilpotent()
    assert not cl.is_symmetric(A)
    assert not cl.is_selfadjoint(rel.infinity_ext(A))
    # the symmetric, non-selfadjoint zero operator on e1 does extend to A_sd
    assert rel.equal(rel.infinity_ext(zero_on_e1()), make_a_sd())


def test_control_domain_tight_laws():
    A = zero_on_e1()  # formally domain tight, dom A* = C^2 is larger
    assert cl.is_formally_domain_tight(A) and not cl.is_domain_tight(A)
    S = rel.adjoint(A)
    re = dc.real_part(A)
    # reaal (ii) and cart-plus (iii) fail along with domain tightness
    assert not rel.equal(rel.cw_sum(re, A), rel.cw_sum(re, S))
    assert not rel.equal(S, re_plus_i_im(A, -1))
    # rmlem (i): dom A* is not inside dom A
    assert not rel.equal(rel.cw_sum(re, A), rel.cw_sum(A, S))


def test_control_range_tight_inv():
    A = zero_on_e1()
    assert not cl.is_range_tight(A)
    assert not cl.is_domain_tight(rel.inverse(A))


def test_control_maximality():
    A = zero_on_e1()
    assert not cl.is_maximal(A, "symmetric")
    assert not ss.equal(A.mul, rel.adjoint(A).mul)
