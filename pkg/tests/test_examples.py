"""Worked examples for the core operations.

Expected values are either immediate (identities, orthonormality) or come
from an independent computation written out here, such as an explicit basis
expansion, rather than from the code under test.
"""
import numpy as np
import pytest

from bornforge import linalg as la
from bornforge.categories import CHOI, CPMap
from bornforge.theory import builtin, check_discard, lambda_scalar, prob

S2 = 1 / np.sqrt(2)
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])


def explicit_choi(op):
    """sum_ij |i><j| (x) op|i><j|op^dagger, written out entry by entry."""
    d_in = op.shape[1]
    blocks = []
    for i in range(d_in):
        for j in range(d_in):
            eij = np.zeros((d_in, d_in))
            eij[i, j] = 1
            blocks.append((eij, op @ eij @ op.conj().T))
    return sum(np.kron(a, b) for a, b in blocks)


# -- compose, tensor ---------------------------------------------------------

def test_compose_identity_left(rng):
    f = la.random_matrix(2, 3, rng)
    assert la.compose(la.identity(3), f).allclose(f, 0)


def test_compose_bra_ket():
    assert la.compose(la.effect([1, 0]), la.state([1, 0])).value == 1
    assert abs(la.compose(la.effect([S2, S2]), la.state([1, 0])).value - S2) <= 1e-15


def test_tensor_with_unit_scalar(rng):
    f = la.random_matrix(2, 2, rng)
    assert la.tensor(f, la.scalar(1)).allclose(f, 0)


def test_tensor_of_kets():
    v = la.tensor(la.state([1, 0]), la.state([0, 1]))
    assert np.array_equal(v.mat[:, 0], [0, 1, 0, 0])


def test_tensor_x_z_on_00():
    out = la.compose(la.tensor(la.matrix(X), la.matrix(Z)), la.state([1, 0, 0, 0], [2, 2]))
    # X|0> = |1>, Z|0> = |0>, so |10>, index 2
    assert np.array_equal(out.mat[:, 0], [0, 0, 1, 0])


# -- Choi and Kraus ----------------------------------------------------------

def test_choi_identity_entries():
    c = la.choi(la.identity(2))
    ones = {(0, 0), (0, 3), (3, 0), (3, 3)}
    for i in range(4):
        for j in range(4):
            assert c[i, j] == (1 if (i, j) in ones else 0)


def test_choi_projector():
    assert np.array_equal(la.choi(la.matrix(np.diag([1, 0]))), np.diag([1, 0, 0, 0]))


def test_choi_z_matches_basis_expansion():
    c = la.choi(la.matrix(Z))
    assert np.allclose(c, explicit_choi(Z.astype(complex)))
    assert c[0, 0] == c[3, 3] == 1 and c[0, 3] == c[3, 0] == -1


def test_kraus_from_choi_identity_is_single_unitary():
    ks = la.kraus_from_choi(la.choi(la.identity(2)), (2, 2))
    assert len(ks) == 1
    (op, w), = ks.items
    assert w == 1.0
    phase = op.mat[0, 0]
    assert abs(abs(phase) - 1) <= 1e-12
    assert np.allclose(op.mat / phase, np.eye(2))


def test_kraus_from_choi_dephasing():
    ks = la.kraus_from_choi(np.diag([1.0, 0, 0, 1]), (2, 2))
    assert len(ks) == 2
    assert np.allclose(la.choi_of_weighted(ks), np.diag([1.0, 0, 0, 1]))
    for op, _ in ks.items:
        assert abs(op.mat[0, 1]) <= 1e-12 and abs(op.mat[1, 0]) <= 1e-12


def test_kraus_from_zero_choi_is_empty():
    assert la.kraus_from_choi(np.zeros((4, 4)), (2, 2)).is_zero


# -- principal square root ---------------------------------------------------

@pytest.mark.parametrize("p,root", [
    (np.eye(2), np.eye(2)),
    (np.diag([4.0, 9.0]), np.diag([2.0, 3.0])),
    (np.diag([0.0, 0.75]), np.diag([0.0, np.sqrt(0.75)])),
])
def test_principal_sqrt_examples(p, root):
    assert la.max_abs(la.principal_sqrt(p) - root) <= 1e-12


# -- unitary completion ------------------------------------------------------

def test_unitary_complete_from_e0():
    u = la.unitary_complete([np.array([1.0, 0.0])])
    assert np.array_equal(u[:, 0], [1, 0])
    assert la.max_abs(u.conj().T @ u - np.eye(2)) <= 1e-12


def test_unitary_complete_full_input_unchanged(rng):
    v = la.random_unitary(3, rng).mat
    assert np.array_equal(la.unitary_complete(v), v)


def test_unitary_complete_plus():
    u = la.unitary_complete([np.array([S2, S2])])
    assert abs(np.vdot(u[:, 0], u[:, 1])) <= 1e-12
    assert la.max_abs(u.conj().T @ u - np.eye(2)) <= 1e-12


# -- random states -----------------------------------------------------------

def test_random_state_in_dim_one_is_phase():
    s = la.random_state(1, np.random.default_rng(8))
    assert s.is_scalar and abs(abs(s.value) - 1) <= 1e-12


def test_haar_mean_overlap_qubit():
    # E|<sigma|rho>|^2 = 1/d for independent Haar vectors
    r = np.random.default_rng(0)
    n = 100_000
    a = r.standard_normal((n, 2)) + 1j * r.standard_normal((n, 2))
    b = r.standard_normal((n, 2)) + 1j * r.standard_normal((n, 2))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    assert abs(np.mean(np.abs(np.sum(a.conj() * b, axis=1)) ** 2) - 0.5) <= 0.01
    # the library sampler draws from the same distribution
    vs = [la.random_state(2, r).mat[:, 0] for _ in range(4000)]
    ws = [la.random_effect(2, r).mat[0] for _ in range(4000)]
    assert abs(np.mean([abs(w @ v) ** 2 for v, w in zip(vs, ws)]) - 0.5) <= 0.03


# -- probabilities -----------------------------------------------------------

def test_prob_examples(fhilb2):
    assert prob(fhilb2, la.state([1, 0]), la.effect([1, 0])) == 1
    assert abs(prob(fhilb2, la.state([1, 0]), la.effect([S2, S2])) - 0.5) <= 1e-15


def test_prob_k3_phase():
    t = builtin("fhilb", k=3)
    rho = la.state([0.5 * np.exp(1j * np.pi / 4), 0])
    assert abs(prob(t, rho, la.effect([1, 0])) - 0.125) <= 1e-15


def test_lambda_examples(fhilb2, cp):
    assert lambda_scalar(fhilb2, la.scalar(1)) == 1
    assert abs(lambda_scalar(fhilb2, la.scalar(0.3 * np.exp(0.4j))) - 0.09) <= 1e-15
    assert lambda_scalar(cp, CHOI.scalar(0.42)) == 0.42


def test_textbook_membership(textbook):
    assert textbook.state_member(la.state([1, 0]))
    assert not textbook.state_member(la.state([0.5, 0]))


def test_cp_maximally_mixed_against_identity(cp):
    rho = CPMap.from_density(np.eye(2) / 2)
    assert abs(prob(cp, rho, CPMap.from_effect_operator(np.eye(2))) - 1) <= 1e-15


def test_cp_discard_with_half_trace_states_fails(cp):
    half = lambda a, r: CPMap.from_density(la.random_density(a.dim, r) * 0.5, a)
    rep = check_discard(cp, n_samples=20, rng=np.random.default_rng(0), state_sampler=half)
    assert not rep.passed
    assert abs(rep.counterexample["p"] - 0.5) <= 1e-12


def test_discard_on_unit(cp):
    assert prob(cp, cp.unit_state, cp.discard(la.UNIT)) == 1
