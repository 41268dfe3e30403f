import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bornforge import linalg as la
from bornforge.errors import (
    DimensionMismatch, NotOrthonormal, NotPSD, ObjectMismatch, WeightedSetTooLarge,
)
from bornforge.linalg import UNIT, Morphism, TheoryObject, WeightedSet

seeds = st.integers(0, 2 ** 32 - 1)
small = st.integers(1, 4)


def gen(seed):
    return np.random.default_rng(seed)


# -- objects -----------------------------------------------------------------

def test_unit_object_has_dim_one_and_no_factors():
    assert UNIT.factors == () and UNIT.dim == 1
    assert repr(UNIT) == "I"


def test_as_object_maps_one_to_unit():
    assert la.as_object(1) == UNIT
    assert la.as_object(3) == TheoryObject((3,))
    assert la.as_object([2, 2]).dim == 4


def test_tensor_of_objects_concatenates():
    a, b = TheoryObject((2,)), TheoryObject((3, 2))
    assert (a @ b).factors == (2, 3, 2)
    assert (UNIT @ a) == a == (a @ UNIT)


def test_object_rejects_zero_factor():
    with pytest.raises(ValueError):
        TheoryObject((2, 0))


# -- morphisms ---------------------------------------------------------------

def test_morphism_is_read_only():
    m = la.identity(2)
    with pytest.raises(ValueError):
        m.mat[0, 0] = 5


def test_morphism_shape_checked():
    with pytest.raises(ObjectMismatch):
        Morphism(la.as_object(2), la.as_object(3), np.zeros((2, 2)))


def test_compose_rejects_mismatch():
    with pytest.raises(DimensionMismatch):
        la.compose(la.identity(2), la.identity(3))


def test_scalar_value_and_kinds():
    z = la.scalar(0.5 + 0.25j)
    assert z.is_scalar and z.value == 0.5 + 0.25j
    assert la.state([1, 0]).is_state and not la.state([1, 0]).is_effect
    with pytest.raises(ObjectMismatch):
        la.identity(2).value


@given(seeds, small, small, small)
def test_compose_associative(seed, a, b, c):
    r = gen(seed)
    f, g, h = la.random_matrix(a, b, r), la.random_matrix(b, c, r), la.random_matrix(c, a, r)
    lhs = la.compose(h, la.compose(g, f))
    rhs = la.compose(la.compose(h, g), f)
    assert lhs.allclose(rhs, 1e-12)


@given(seeds, small, small, small, small)
def test_tensor_interchange(seed, a, b, c, d):
    r = gen(seed)
    f1, g1 = la.random_matrix(a, b, r), la.random_matrix(b, a, r)
    f2, g2 = la.random_matrix(c, d, r), la.random_matrix(d, c, r)
    lhs = la.compose(la.tensor(g1, g2), la.tensor(f1, f2))
    rhs = la.tensor(la.compose(g1, f1), la.compose(g2, f2))
    assert lhs.allclose(rhs, 1e-12)


@given(seeds, small, small)
def test_swap_naturality(seed, a, b):
    r = gen(seed)
    f, g = la.random_matrix(a, a, r), la.random_matrix(b, b, r)
    lhs = la.compose(la.swap(a, b), la.tensor(f, g))
    rhs = la.compose(la.tensor(g, f), la.swap(a, b))
    assert lhs.allclose(rhs, 1e-12)


@given(small, small)
def test_swap_is_involution(a, b):
    s = la.compose(la.swap(b, a), la.swap(a, b))
    assert s.allclose(la.identity(la.as_object(a) @ la.as_object(b)), 0)


def test_permutation_matrix_moves_basis_vectors():
    p = la.permutation_matrix([2, 3], [1, 0])
    # |i, j> -> |j, i>; |1, 2> is index 5 in 2x3, lands at |2, 1> index 5 in 3x2
    v = np.zeros(6)
    v[1 * 3 + 2] = 1
    assert np.argmax(p @ v) == 2 * 2 + 1


# -- Choi matrices and Kraus decompositions ----------------------------------

def test_choi_of_identity_is_unnormalised_bell_projector():
    c = la.choi(la.identity(2))
    phi = np.array([1, 0, 0, 1])
    assert np.allclose(c, np.outer(phi, phi))


@given(seeds, small, small)
def test_choi_is_phase_invariant(seed, a, b):
    r = gen(seed)
    f = la.random_matrix(a, b, r)
    g = f.scaled(np.exp(1j * r.uniform(0, 2 * np.pi)))
    assert la.max_abs(la.choi(f) - la.choi(g)) <= 1e-12


@given(seeds, small, small, st.integers(1, 3))
def test_kraus_from_choi_round_trip(seed, a, b, r_):
    r = gen(seed)
    ops = [la.random_matrix(a, b, r) for _ in range(r_)]
    c = sum(la.choi(f) for f in ops)
    ks = la.kraus_from_choi(c, (a, b))
    assert len(ks) <= a * b
    assert la.max_abs(la.choi_of_weighted(ks) - c) <= 1e-9


def test_kraus_from_choi_rejects_non_psd():
    with pytest.raises(NotPSD):
        la.kraus_from_choi(np.diag([1.0, -1.0, 0, 0]), (2, 2))


def test_principal_sqrt_squares_back(rng):
    p = la.random_psd(3, rng)
    s = la.principal_sqrt(p)
    assert la.max_abs(s @ s - p) <= 1e-12
    assert la.max_abs(s - s.conj().T) <= 1e-12


def test_principal_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        la.principal_sqrt(np.diag([1.0, -0.5]))


# -- unitary completion ------------------------------------------------------

@given(seeds, st.integers(1, 6), st.data())
def test_unitary_complete_keeps_columns(seed, n, data):
    k = data.draw(st.integers(0, n))
    q = la.random_unitary(n, gen(seed)).mat[:, :k]
    u = la.unitary_complete(q, n)
    assert la.max_abs(u.conj().T @ u - np.eye(n)) <= 1e-10
    assert np.array_equal(u[:, :k], q)


def test_unitary_complete_is_deterministic(rng):
    q = la.random_unitary(4, rng).mat[:, :2]
    assert np.array_equal(la.unitary_complete(q), la.unitary_complete(q))


def test_unitary_complete_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        la.unitary_complete([np.array([1.0, 0]), np.array([1.0, 1.0])])


# -- samplers ----------------------------------------------------------------

@given(seeds, st.integers(1, 5))
def test_random_state_is_unit(seed, d):
    s = la.random_state(d, gen(seed))
    assert abs(np.linalg.norm(s.mat) - 1) <= 1e-12


@given(seeds, small, small)
def test_random_contraction_norm(seed, a, b):
    f = la.random_contraction(a, b, gen(seed))
    assert np.linalg.norm(f.mat, 2) <= 1 + 1e-12


@given(seeds, st.integers(1, 4))
def test_random_density_is_state(seed, d):
    rho = la.random_density(d, gen(seed))
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert np.linalg.eigvalsh(rho)[0] >= -1e-12


def test_samplers_reproducible():
    a = la.random_matrix(2, 3, np.random.default_rng(5))
    b = la.random_matrix(2, 3, np.random.default_rng(5))
    assert np.array_equal(a.mat, b.mat)


# -- weighted sets -----------------------------------------------------------

def test_weighted_set_rejects_nonpositive_weight():
    with pytest.raises(ValueError):
        WeightedSet.single(la.scalar(1), 0.0)


def test_weighted_set_rejects_mixed_types():
    with pytest.raises(ObjectMismatch):
        WeightedSet(UNIT, la.as_object(2), ((la.state([1, 0, 0]), 1.0),))


def test_weighted_set_cap():
    items = tuple((la.scalar(1), 1.0) for _ in range(la.MAX_WEIGHTED_ITEMS + 1))
    with pytest.raises(WeightedSetTooLarge):
        WeightedSet(UNIT, UNIT, items)


def test_zero_weighted_set():
    z = WeightedSet.zero(2, 2)
    assert z.is_zero and len(z) == 0 and z.weights.shape == (0,)


def test_choi_of_weighted_sums():
    ws = WeightedSet(UNIT, 2, ((la.state([1, 0]), 0.5), (la.state([0, 1]), 0.5)))
    assert np.allclose(la.choi_of_weighted(ws), np.eye(2) / 2)
    assert math.isclose(float(np.trace(la.choi_of_weighted(ws)).real), 1.0)
