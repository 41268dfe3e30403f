import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bornforge import linalg as la
from bornforge import noise as nz
from bornforge.categories import CPMap
from bornforge.errors import NotSimplified, ObjectMismatch, OutOfRange, UnsupportedTheory
from bornforge.linalg import UNIT, WeightedSet
from bornforge.theory import builtin, prob

seeds = st.integers(0, 2 ** 32 - 1)
S2 = 1 / np.sqrt(2)


def mix(vectors, weights):
    return WeightedSet(UNIT, 2, tuple((la.state(v), w) for v, w in zip(vectors, weights)))


MIX01 = mix([[1, 0], [0, 1]], [0.5, 0.5])
MIXPM = mix([[S2, S2], [S2, -S2]], [0.5, 0.5])


# -- summed category ---------------------------------------------------------

def test_compose_singletons(rng):
    f, g = la.random_matrix(2, 2, rng), la.random_matrix(2, 2, rng)
    out = nz.ws_compose(WeightedSet.single(g, 2), WeightedSet.single(f, 3))
    assert len(out) == 1
    (h, w), = out.items
    assert w == 6 and h.allclose(la.compose(g, f), 0)


def test_compose_with_zero(rng):
    f = WeightedSet.single(la.random_matrix(2, 2, rng))
    assert nz.ws_compose(WeightedSet.zero(2, 2), f).is_zero
    assert nz.ws_compose(f, WeightedSet.zero(2, 2)).is_zero


def test_tensor_counts_and_weights(fhilb2, rng):
    a = nz.random_weighted_set(fhilb2, 2, 2, rng, max_items=2)
    while len(a) != 2:
        a = nz.random_weighted_set(fhilb2, 2, 2, rng, max_items=2)
    t = nz.ws_tensor(a, a)
    assert len(t) == 4
    assert sorted(t.weights) == sorted(v * w for v in a.weights for w in a.weights)


def test_union_with_zero_and_commutes(fhilb2, rng):
    a = nz.random_weighted_set(fhilb2, 2, 2, rng)
    b = nz.random_weighted_set(fhilb2, 2, 2, rng)
    assert nz.same_items(nz.ws_union(a, WeightedSet.zero(2, 2)), a) == 0
    assert nz.noisy_canonical(nz.ws_union(a, b), fhilb2) == nz.noisy_canonical(nz.ws_union(b, a), fhilb2)


def test_union_mismatch():
    with pytest.raises(ObjectMismatch):
        nz.ws_union(WeightedSet.zero(2, 2), WeightedSet.zero(2, 3))


@given(seeds)
def test_distributivity_canonical(seed):
    t = builtin("fhilb")
    r = np.random.default_rng(seed)
    a, b, c = (nz.random_weighted_set(t, 2, 2, r, max_items=2) for _ in range(3))
    lhs = nz.ws_tensor(c, nz.ws_union(a, b))
    rhs = nz.ws_union(nz.ws_tensor(c, a), nz.ws_tensor(c, b))
    assert nz.noisy_canonical(lhs, t) == nz.noisy_canonical(rhs, t)


@given(seeds)
def test_interchange_exact_up_to_order(seed):
    t = builtin("fhilb")
    r = np.random.default_rng(seed)
    f1, g1 = nz.random_weighted_set(t, 2, 2, r, 2), nz.random_weighted_set(t, 2, 2, r, 2)
    f2, g2 = nz.random_weighted_set(t, 1, 2, r, 2), nz.random_weighted_set(t, 2, 3, r, 2)
    lhs = nz.ws_compose(nz.ws_tensor(g1, g2), nz.ws_tensor(f1, f2))
    rhs = nz.ws_tensor(nz.ws_compose(g1, f1), nz.ws_compose(g2, f2))
    assert nz.same_items(lhs, rhs, tol=1e-12) <= 1e-12


# -- probabilities -----------------------------------------------------------

def test_prob_s_mixture_against_bra0(fhilb2):
    assert nz.prob_S(MIX01, WeightedSet.single(la.effect([1, 0])), fhilb2) == 0.5


def test_prob_s_zero(fhilb2, rng):
    e = nz.random_weighted_set(fhilb2, 2, 1, rng)
    assert nz.prob_S(WeightedSet.zero(UNIT, 2), e, fhilb2) == 0.0
    assert nz.prob_S(MIX01, WeightedSet.zero(2, UNIT), fhilb2) == 0.0


@pytest.mark.parametrize("name,k", [("fhilb", 2), ("fhilb", 3), ("cp", 2)])
def test_prob_s_singletons_reduce_to_prob(name, k, rng):
    t = builtin(name, k=k)
    rho, sigma = t.sampler.state(la.as_object(3), rng), t.sampler.effect(la.as_object(3), rng)
    p = nz.prob_S(WeightedSet.single(rho), WeightedSet.single(sigma), t)
    assert abs(p - prob(t, rho, sigma)) <= 1e-12


def test_prob_s_needs_simplified(textbook):
    with pytest.raises(NotSimplified):
        nz.prob_S(MIX01, WeightedSet.single(la.effect([1, 0])), textbook)


def test_lambda_s_weight_sum(fhilb2):
    g = WeightedSet(UNIT, UNIT, ((la.scalar(1), 0.3), (la.scalar(1), 0.7)))
    assert abs(nz.lambda_S(g, fhilb2) - 1.0) <= 1e-15


def test_lambda_n_single_item(fhilb2):
    z, w = 0.6 * np.exp(0.3j), 1.7
    x = nz.noisy_canonical(WeightedSet.single(la.scalar(z), w), fhilb2)
    assert abs(nz.lambda_N(x) - w * abs(z) ** 2) <= 1e-15


def test_theta_n_round_trip(fhilb2):
    assert abs(nz.lambda_N(nz.theta_N(0.25, fhilb2)) - 0.25) <= 1e-15
    assert nz.lambda_N(nz.theta_N(0, fhilb2)) == 0
    with pytest.raises(OutOfRange):
        nz.theta_N(-1, fhilb2)


# -- canonical forms ---------------------------------------------------------

def test_basis_mixtures_have_equal_canon(fhilb2):
    a, b = nz.noisy_canonical(MIX01, fhilb2), nz.noisy_canonical(MIXPM, fhilb2)
    assert np.allclose(a.canon, np.eye(2) / 2)
    assert a == b


def test_dephasing_canon():
    ws = WeightedSet(2, 2, ((la.identity(2), 0.5), (la.matrix(np.diag([1, -1])), 0.5)))
    # brute force: 0.5 * (choi(I) + choi(Z)) with the basis expansion written out
    phi, phiz = np.array([1, 0, 0, 1.0]), np.array([1, 0, 0, -1.0])
    e = 0.5 * (np.outer(phi, phi) + np.outer(phiz, phiz))
    assert np.allclose(nz.noisy_canonical(ws, builtin("fhilb")).canon, e)
    assert np.allclose(e, np.diag([1, 0, 0, 1]))


def test_singleton_canon_is_choi(fhilb2, rng):
    f = la.random_matrix(2, 3, rng)
    assert la.max_abs(nz.noisy_canonical(WeightedSet.single(f), fhilb2).canon - la.choi(f)) <= 1e-12


def test_canonical_unsupported_for_k3():
    with pytest.raises(UnsupportedTheory):
        nz.noisy_canonical(MIX01, builtin("fhilb", k=3))


@given(seeds)
def test_canon_is_positive(seed):
    t = builtin("fhilb")
    r = np.random.default_rng(seed)
    ws = nz.random_weighted_set(t, 2, 2, r, allow_empty=True)
    c = nz.noisy_canonical(ws, t).canon
    assert np.linalg.eigvalsh(c)[0] >= -1e-9


@given(seeds)
def test_noisy_variant_same_class(seed):
    t = builtin("fhilb")
    r = np.random.default_rng(seed)
    ws = nz.random_weighted_set(t, 2, 2, r)
    assert nz.noisy_canonical(nz.noisy_variant(ws, t, r), t) == nz.noisy_canonical(ws, t)


def test_cp_variant_same_class(cp, rng):
    ws = nz.random_weighted_set(cp, 2, 2, rng)
    assert nz.noisy_canonical(nz.noisy_variant(ws, cp, rng), cp) == nz.noisy_canonical(ws, cp)


# -- equivalence -------------------------------------------------------------

def test_equiv_mixtures_both_modes(fhilb2):
    assert nz.equiv_noisy(MIX01, MIXPM, fhilb2).equivalent
    assert nz.equiv_noisy(MIX01, MIXPM, fhilb2, "probe").equivalent


def test_equiv_weight_differs(fhilb2):
    a = WeightedSet.single(la.state([1, 0]), 1.0)
    b = WeightedSet.single(la.state([1, 0]), 0.5)
    assert not nz.equiv_noisy(a, b, fhilb2).equivalent
    res = nz.equiv_noisy(a, b, fhilb2, "probe")
    assert not res.equivalent and res.witness is not None


def test_equiv_bad_mode(fhilb2):
    with pytest.raises(ValueError):
        nz.equiv_noisy(MIX01, MIXPM, fhilb2, "guess")


def test_modes_agree_on_random_pairs(fhilb2):
    r = np.random.default_rng(77)
    for i in range(500):
        a = nz.random_weighted_set(fhilb2, 1, 2, r, max_items=2)
        b = nz.noisy_variant(a, fhilb2, r) if i % 2 else nz.random_weighted_set(fhilb2, 1, 2, r, 2)
        canon = nz.equiv_noisy(a, b, fhilb2).equivalent
        probe = nz.equiv_noisy(a, b, fhilb2, "probe", n_samples=20, rng=r).equivalent
        assert canon == probe


def test_probe_mode_only_for_k3():
    t = builtin("fhilb", k=3)
    a = WeightedSet.single(la.state([1, 0]))
    b = WeightedSet.single(la.state([np.exp(0.5j), 0]))
    assert nz.equiv_noisy(a, b, t, "probe").equivalent
    with pytest.raises(UnsupportedTheory):
        nz.equiv_noisy(a, b, t, "canonical")


# -- semiring and rigidity ---------------------------------------------------

@pytest.mark.parametrize("name,k", [("fhilb", 2), ("fhilb", 3), ("cp", 2)])
def test_semiring_laws(name, k):
    rep = nz.semiring_check(builtin(name, k=k), 60, np.random.default_rng(1))
    assert rep.passed, [r.law for r in rep.laws if not r.passed]
    assert all(r.worst_deviation < 1e-9 for r in rep.laws)


def test_semiring_k3_uses_lambda_equality():
    rep = nz.semiring_check(builtin("fhilb", k=3), 10)
    assert not rep.canonical and nz.NO_CANONICAL_FORM in rep.note


def test_semiring_squared_lambda_fails_additivity(fhilb2):
    rep = nz.semiring_check(fhilb2, 40, np.random.default_rng(2),
                            lambda_fn=lambda g: nz.lambda_S(g, fhilb2) ** 2)
    law = rep.law("lambda_additive")
    assert not law.passed and law.counterexample is not None
    assert rep.law("lambda_multiplicative").passed


def test_semiring_needs_simplified(textbook):
    with pytest.raises(NotSimplified):
        nz.semiring_check(textbook, 1)


@pytest.mark.parametrize("r", [0.0, 1.0, 0.5, 1 / 3, 0.847, 7 / 3])
def test_rigidity_points(fhilb2, r):
    x = nz.noisy_canonical(nz.scalar_set_with_value(r, np.random.default_rng(0), fhilb2), fhilb2)
    assert abs(nz.lambda_N(x) - r) <= 1e-9


def test_rigidity_seven_thirds():
    rep = nz.rigidity_check(10, np.random.default_rng(5))
    pt = next(p for p in rep.points if math.isclose(p["r"], 7 / 3))
    assert abs(pt["lambda_N"] - 2.333333333) <= 1e-9


def test_rigidity_check_passes():
    rep = nz.rigidity_check(50, np.random.default_rng(6))
    assert rep.passed and rep.naturals_ok and rep.order_ok
    assert len(rep.points) == 50 and rep.worst_deviation <= 1e-9


def test_lambda_n_injective_on_scalar_classes(fhilb2, rng):
    for _ in range(50):
        a = nz.noisy_canonical(nz.random_scalar_set(fhilb2, rng), fhilb2)
        b = nz.noisy_canonical(nz.random_scalar_set(fhilb2, rng), fhilb2)
        assert (abs(nz.lambda_N(a) - nz.lambda_N(b)) <= 1e-9) == (a == b)


def test_cp_items_in_summed_choi(cp):
    rho = CPMap.from_density(np.diag([1.0, 0.0]))
    ws = WeightedSet(UNIT, 2, ((rho, 0.25), (rho, 0.75)))
    assert np.allclose(nz.summed_choi(ws), np.diag([1.0, 0.0]))
