import numpy as np
import pytest
from hypothesis import given, strategies as st

from bornforge import linalg as la
from bornforge.categories import (
    CHOI, MATRIX, CPMap, category_of, choi_to_superop, relabel, superop_to_choi,
)
from bornforge.errors import DimensionMismatch, ObjectMismatch

seeds = st.integers(0, 2 ** 32 - 1)
small = st.integers(1, 3)


def kraus_map(a, b, r, rank=2):
    ops = [la.random_matrix(a, b, r) for _ in range(rank)]
    return CPMap(la.as_object(a), la.as_object(b), sum(la.choi(f) for f in ops)), ops


def apply_kraus(ops, rho):
    return sum(f.mat @ rho @ f.mat.conj().T for f in ops)


@given(seeds, small, small, small)
def test_choi_compose_matches_kraus_action(seed, a, b, c):
    r = np.random.default_rng(seed)
    f, fo = kraus_map(a, b, r)
    g, go = kraus_map(b, c, r)
    rho = la.random_density(a, r)
    out = CHOI.compose(g, CHOI.compose(f, CPMap.from_density(rho, a)))
    assert la.max_abs(out.density - apply_kraus(go, apply_kraus(fo, rho))) <= 1e-10


@given(seeds, small, small)
def test_superop_round_trip(seed, a, b):
    f, _ = kraus_map(a, b, np.random.default_rng(seed))
    s = choi_to_superop(f.choi, a, b)
    assert np.allclose(superop_to_choi(s, a, b), f.choi)


@given(seeds, small, small, small, small)
def test_choi_tensor_is_kraus_tensor(seed, a, b, c, d):
    r = np.random.default_rng(seed)
    f, g = la.random_matrix(a, b, r), la.random_matrix(c, d, r)
    lhs = CHOI.tensor(CPMap.from_kraus(f), CPMap.from_kraus(g))
    assert la.max_abs(lhs.choi - la.choi(la.tensor(f, g))) <= 1e-12


@given(seeds, small, small)
def test_choi_identity_laws(seed, a, b):
    f, _ = kraus_map(a, b, np.random.default_rng(seed))
    assert CHOI.compose(CHOI.identity(b), f).allclose(f, 1e-12)
    assert CHOI.compose(f, CHOI.identity(a)).allclose(f, 1e-12)


@pytest.mark.parametrize("cat", [MATRIX, CHOI], ids=["matrix", "choi"])
@given(seed=seeds, a=small, b=small)
def test_linear_read_off(cat, seed, a, b):
    r = np.random.default_rng(seed)
    if cat is CHOI:
        s = CPMap.from_density(la.random_density(a, r), a)
        e = CPMap.from_effect_operator(la.random_psd(b, r), b)
        f, _ = kraus_map(a, b, r)
    else:
        s, e, f = la.random_state(a, r), la.random_effect(b, r), la.random_matrix(a, b, r)
    direct = cat.compose(e, cat.compose(f, s)).value
    read = cat.vec_effect(e) @ cat.linear(f) @ cat.vec_state(s)
    assert abs(direct - read) <= 1e-10


def test_effect_pairing_is_trace():
    r = np.random.default_rng(1)
    rho, e = la.random_density(3, r), la.random_psd(3, r)
    p = CHOI.compose(CPMap.from_effect_operator(e), CPMap.from_density(rho)).value
    assert abs(p - np.trace(rho @ e)) <= 1e-12


def test_choi_compose_mismatch():
    with pytest.raises(DimensionMismatch):
        CHOI.compose(CHOI.identity(2), CHOI.identity(3))


def test_choi_shape_checked():
    with pytest.raises(ObjectMismatch):
        CPMap(la.as_object(2), la.as_object(2), np.eye(2))


def test_category_of_and_relabel():
    assert category_of(la.identity(2)) is MATRIX
    assert category_of(CHOI.identity(2)) is CHOI
    with pytest.raises(TypeError):
        category_of(3)
    m = relabel(la.identity(4), [2, 2], [2, 2])
    assert m.dom.factors == (2, 2)
    with pytest.raises(ObjectMismatch):
        relabel(la.identity(4), 3)


def test_zero_morphisms():
    assert not MATRIX.zero(2, 3).mat.any()
    assert not CHOI.zero(2, 3).choi.any()
