"""Probabilistic equivalence, canonical classes and the dilation-triple category.

A :class:`GTriple` ``(U, rho, sigma)`` stands for the process
``(1_B (x) sigma) U (1_A (x) rho)``; ancilla wires always sit after the system
wires.  Equality of classes is decided two ways: by canonical Choi forms
(:func:`canonicalize`) and by randomised probing (:func:`equiv_probe`).  The
harness cross-checks one against the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import linalg as la
from .categories import CHOI, CPMap, relabel
from .errors import NotContraction, NotMember, ObjectMismatch, OutOfRange, UnsupportedTheory
from .linalg import ATOL, PROBE_TOL, UNIT, Morphism, TheoryObject, as_object, max_abs
from .theory import (
    BornPower, Custom, StochasticInner, TheorySpec, TraceRule, batch_prob, builtin,
    check_effect, check_state, prob, raw_prob,
)

DEFAULT_PROBE_DIMS = (1, 2)
MAX_BASIS_PROBES = 64


# -- G triples ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GTriple:
    """Representative (U, rho, sigma) of a morphism ``dom -> cod``."""

    theory: TheorySpec
    U: Any
    rho: Any
    sigma: Any
    dom: TheoryObject
    cod: TheoryObject

    @property
    def anc_in(self) -> TheoryObject:
        return self.rho.cod

    @property
    def anc_out(self) -> TheoryObject:
        return self.sigma.dom

    @property
    def is_state(self) -> bool:
        return self.dom.dim == 1

    @property
    def is_effect(self) -> bool:
        return self.cod.dim == 1

    @property
    def is_scalar(self) -> bool:
        return self.is_state and self.is_effect

    def __repr__(self):
        return (f"GTriple({self.dom!r} -> {self.cod!r}, ancilla {self.anc_in!r} -> "
                f"{self.anc_out!r}, theory={self.theory.name})")


def make_triple(t: TheorySpec, U, rho, sigma, dom=None, cod=None) -> GTriple:
    """Validate wiring and membership, then build a triple."""
    X, Xp = rho.cod, sigma.dom
    if dom is None:
        dom = TheoryObject(U.dom.factors[:len(U.dom.factors) - len(X.factors)])
    if cod is None:
        cod = TheoryObject(U.cod.factors[:len(U.cod.factors) - len(Xp.factors)])
    dom, cod = as_object(dom), as_object(cod)
    if not rho.is_state or not sigma.is_effect:
        raise ObjectMismatch("rho must be a state and sigma an effect")
    if (dom @ X).dim != U.dom.dim or (cod @ Xp).dim != U.cod.dim:
        raise ObjectMismatch(f"U: {U.dom!r} -> {U.cod!r} does not fit {dom!r}x{X!r} -> {cod!r}x{Xp!r}")
    if U.dom != dom @ X or U.cod != cod @ Xp:
        U = relabel(U, dom @ X, cod @ Xp)
    if not isinstance(U, t.category.morphism_type):
        raise NotMember(f"U is a {type(U).__name__}, not a morphism of {t.name}")
    if not t.process_member(U):
        raise NotMember(f"U is not a physical process of {t.name}")
    check_state(t, rho)
    check_effect(t, sigma)
    return GTriple(t, U, rho, sigma, dom, cod)


def g_embed(t: TheorySpec, f) -> GTriple:
    """The triple of a physical process, state or effect.

    Processes in the dynamics become (f, 1_I, 1_I).  A physical state rho on
    A that is not itself dynamics becomes (1_A, rho, 1_I), and an effect
    becomes (1_A, 1_I, sigma).
    """
    f = t.category.embed(f)
    one = t.unit_state
    if t.process_member(f):
        return make_triple(t, f, one, one, f.dom, f.cod)
    if f.dom == UNIT and t.state_member(f):
        return make_triple(t, t.category.identity(f.cod), f, one, UNIT, f.cod)
    if f.cod == UNIT and t.effect_member(f):
        return make_triple(t, t.category.identity(f.dom), one, f, f.dom, UNIT)
    raise NotMember(f"not a physical process, state or effect of {t.name}")


def g_identity(t: TheorySpec, obj) -> GTriple:
    return g_embed(t, t.category.identity(as_object(obj)))


def g_swap(t: TheorySpec, a, b) -> GTriple:
    return g_embed(t, t.category.permute([as_object(a), as_object(b)], [1, 0]))


def _as_triple(t: TheorySpec, x) -> GTriple:
    return x if isinstance(x, GTriple) else g_embed(t, x)


def _check_member(t: TheorySpec, U):
    if not t.process_member(U):
        raise NotMember(f"wired process is not physical in {t.name}; its dynamics is not closed")


def g_compose(a: GTriple, b: GTriple) -> GTriple:
    """a . b: apply b, then a.  Ancillas are tensored as (a's, b's)."""
    if b.cod != a.dom:
        raise ObjectMismatch(f"cannot compose: b.cod={b.cod!r} but a.dom={a.dom!r}")
    t = a.theory
    cat = t.category
    A, B, C = b.dom, b.cod, a.cod
    Xa, Xb, Xap, Xbp = a.anc_in, b.anc_in, a.anc_out, b.anc_out
    w = cat.permute([A, Xa, Xb], [0, 2, 1])
    w = cat.compose(cat.tensor(b.U, cat.identity(Xa)), w)
    w = cat.compose(cat.permute([B, Xbp, Xa], [0, 2, 1]), w)
    w = cat.compose(cat.tensor(a.U, cat.identity(Xbp)), w)
    _check_member(t, w)
    return GTriple(t, w, cat.tensor(a.rho, b.rho), cat.tensor(a.sigma, b.sigma), A, C)


def g_tensor(a: GTriple, b: GTriple) -> GTriple:
    t = a.theory
    cat = t.category
    A, B, C, D = a.dom, a.cod, b.dom, b.cod
    Xa, Xb, Xap, Xbp = a.anc_in, b.anc_in, a.anc_out, b.anc_out
    w = cat.permute([A, C, Xa, Xb], [0, 2, 1, 3])
    w = cat.compose(cat.tensor(a.U, b.U), w)
    w = cat.compose(cat.permute([B, Xap, D, Xbp], [0, 2, 1, 3]), w)
    _check_member(t, w)
    return GTriple(t, w, cat.tensor(a.rho, b.rho), cat.tensor(a.sigma, b.sigma), A @ C, B @ D)


def g_collapse(x: GTriple):
    """(1_B (x) sigma) U (1_A (x) rho) as a plain morphism ``dom -> cod``."""
    cat = x.theory.category
    prep = cat.tensor(cat.identity(x.dom), x.rho)
    post = cat.tensor(cat.identity(x.cod), x.sigma)
    return cat.compose(post, cat.compose(x.U, prep))


def g_prob(s: GTriple, e: GTriple) -> float:
    """Probability of a triple state against a triple effect."""
    if s.dom.dim != 1 or e.cod.dim != 1:
        raise ObjectMismatch("g_prob needs a state triple and an effect triple")
    if s.cod != e.dom:
        raise ObjectMismatch(f"state on {s.cod!r} cannot meet effect on {e.dom!r}")
    w = g_compose(e, s)
    t = s.theory
    return raw_prob(t, t.category.compose(w.U, relabel(w.rho, cod=w.U.dom)), w.sigma)


def lambda_G(x: GTriple) -> float:
    if not x.is_scalar:
        raise ObjectMismatch("lambda_G takes a scalar triple")
    return g_prob(g_identity(x.theory, UNIT), x)


def random_triple(t: TheorySpec, dom, cod, rng: np.random.Generator,
                  scale: Sequence[int] = (1, 2), max_total: int = 16) -> GTriple:
    """A random triple whose ancillas make dim(A (x) X) = dim(B (x) X')."""
    dom, cod = as_object(dom), as_object(cod)
    s = t.sampler
    lcm = dom.dim * cod.dim // math.gcd(dom.dim, cod.dim)
    choices = [m for m in scale if lcm * m <= max_total] or [1]
    total = lcm * int(rng.choice(choices))
    X, Xp = as_object(total // dom.dim), as_object(total // cod.dim)
    U = s.process(dom @ X, cod @ Xp, rng)
    return make_triple(t, U, s.state(X, rng), s.effect(Xp, rng), dom, cod)


def _ancilla_rotation(t: TheorySpec, obj: TheoryObject, rng) -> Morphism:
    """A reversible process on ``obj`` whose inverse (its dagger) is also physical."""
    if isinstance(t.rule, StochasticInner):
        return Morphism(obj, obj, np.eye(obj.dim)[rng.permutation(obj.dim)])
    return la.random_unitary(obj, rng)


def equivalent_variant(x: GTriple, rng: np.random.Generator, pad: int = 2) -> GTriple:
    """Another representative of the same class.

    Applies ancilla padding with a (basis state, basis effect) pair, then a
    random reversible relabelling of both ancillas, then (for amplitude
    theories) a global phase.
    """
    t = x.theory
    cat = t.category
    s = t.sampler
    Y = as_object(pad)
    U = cat.tensor(x.U, cat.identity(Y))
    rho = cat.tensor(x.rho, s.basis_state(Y, 0))
    sigma = cat.tensor(x.sigma, s.basis_effect(Y, 0))
    X, Xp = rho.cod, sigma.dom
    if cat is CHOI:
        v_in = la.random_unitary(X, rng)
        v_out = la.random_unitary(Xp, rng)
        U = cat.compose(cat.tensor(cat.identity(x.cod), cat.embed(v_out)),
                        cat.compose(U, cat.tensor(cat.identity(x.dom), cat.embed(v_in.dagger))))
        rho = cat.compose(cat.embed(v_in), rho)
        sigma = cat.compose(sigma, cat.embed(v_out.dagger))
    else:
        v_in = _ancilla_rotation(t, X, rng)
        v_out = _ancilla_rotation(t, Xp, rng)
        U = la.compose(la.tensor(la.identity(x.cod), v_out),
                       la.compose(U, la.tensor(la.identity(x.dom), v_in.dagger)))
        rho = la.compose(v_in, rho)
        sigma = la.compose(sigma, v_out.dagger)
        if isinstance(t.rule, BornPower):
            U = U.scaled(np.exp(2j * np.pi * rng.random()))
    return make_triple(t, U, rho, sigma, x.dom, x.cod)


# -- Stinespring dilation ----------------------------------------------------

def stinespring_dilate(f: Morphism, theory: TheorySpec = None, tol: float = 1e-8) -> GTriple:
    """Unitary dilation (U, |0>_X, <0|_X') of a contraction f: A -> B.

    dim X = 2 dim B and dim X' = 2 dim A.  Column ``a (x) |0>`` of U is
    ``f|a> (x) |0'> + sum_c D[c, a] |c mod m> (x) |1 + c // m>`` with
    ``D = sqrt(I - f^dagger f)``; the remaining columns come from
    :func:`bornforge.linalg.unitary_complete`.
    """
    t = theory or builtin("textbook")
    n, m = f.dom.dim, f.cod.dim
    norm = float(np.linalg.norm(f.mat, 2)) if f.mat.size else 0.0
    if norm > 1 + tol:
        raise NotContraction(f"operator norm {norm:.12g} exceeds 1")
    D = la.principal_sqrt(np.eye(n) - f.mat.conj().T @ f.mat, tol=3 * tol)
    dX, dXp = 2 * m, 2 * n
    N = n * dX
    cols = np.zeros((N, n), dtype=complex)
    for a in range(n):
        for b in range(m):
            cols[b * dXp, a] = f.mat[b, a]
        for c in range(n):
            cols[(c % m) * dXp + 1 + c // m, a] += D[c, a]
    Q = la.unitary_complete(cols)
    U = np.zeros((N, N), dtype=complex)
    fixed = [a * dX for a in range(n)]
    rest = [j for j in range(N) if j % dX != 0]
    U[:, fixed] = Q[:, :n]
    U[:, rest] = Q[:, n:]
    X, Xp = as_object(dX), as_object(dXp)
    rho = la.state(np.eye(dX)[0], X)
    sigma = la.effect(np.eye(dXp)[0], Xp)
    return make_triple(t, Morphism(f.dom @ X, f.cod @ Xp, U), rho, sigma, f.dom, f.cod)


# -- probing -----------------------------------------------------------------

@dataclass
class ProbeResult:
    """Outcome of a randomised equivalence probe (true means not refuted)."""

    equivalent: bool
    max_deviation: float
    samples: int
    witness: Optional[dict] = None
    dims: tuple = DEFAULT_PROBE_DIMS

    def __bool__(self):
        return self.equivalent


def _probe_map(x: GTriple, Z: TheoryObject):
    """Linear stand-in for ``tau |-> (sigma-part) (U (x) 1_Z)(tau (x) rho)``."""
    cat = x.theory.category
    return cat.tensor(g_collapse(x), cat.identity(Z))


def _probe_probs(x: GTriple, Z: TheoryObject, taus, mus) -> np.ndarray:
    t = x.theory
    if t.rule.linear:
        return batch_prob(t, mus, _probe_map(x, Z), taus)
    cat = t.category
    A, B, X, Xp = x.dom, x.cod, x.anc_in, x.anc_out
    w = cat.permute([A, Z, X], [0, 2, 1])
    w = cat.compose(cat.tensor(x.U, cat.identity(Z)), w)
    w = cat.compose(cat.permute([B, Xp, Z], [0, 2, 1]), w)
    out = []
    for tau, mu in zip(taus, mus):
        st = cat.compose(w, cat.tensor(relabel(tau, cod=A @ Z), x.rho))
        out.append(raw_prob(t, st, cat.tensor(relabel(mu, dom=B @ Z), x.sigma)))
    return np.array(out, dtype=float)


def _probe_sets(t: TheorySpec, A, B, dims, n_samples, rng, basis):
    s = t.sampler
    groups = {}
    if basis:
        Z = as_object(1)
        pairs = [(i, j) for i in range(A.dim) for j in range(B.dim)][:MAX_BASIS_PROBES]
        AZ, BZ = A @ Z, B @ Z
        groups.setdefault(Z, ([], []))
        for i, j in pairs:
            groups[Z][0].append(s.basis_state(AZ, i))
            groups[Z][1].append(s.basis_effect(BZ, j))
    for idx in range(n_samples):
        Z = as_object(dims[idx % len(dims)])
        taus, mus = groups.setdefault(Z, ([], []))
        taus.append(s.state(A @ Z, rng))
        mus.append(s.effect(B @ Z, rng))
    return groups


def equiv_probe(t: TheorySpec, f, g, n_samples: int = 200,
                dims: Sequence[int] = DEFAULT_PROBE_DIMS,
                rng: np.random.Generator = None, tol: float = PROBE_TOL,
                basis: bool = True) -> ProbeResult:
    """Search for an ancilla-extended probe telling f and g apart."""
    rng = np.random.default_rng(0) if rng is None else rng
    x, y = _as_triple(t, f), _as_triple(t, g)
    if x.dom != y.dom or x.cod != y.cod:
        raise ObjectMismatch(f"{x.dom!r}->{x.cod!r} vs {y.dom!r}->{y.cod!r}")
    dims = tuple(int(d) for d in dims)
    worst, witness, total = 0.0, None, 0
    for Z, (taus, mus) in _probe_sets(t, x.dom, x.cod, dims, n_samples, rng, basis).items():
        px, py = _probe_probs(x, Z, taus, mus), _probe_probs(y, Z, taus, mus)
        total += len(taus)
        dev = np.abs(px - py)
        if dev.size == 0:
            continue
        worst = max(worst, float(dev.max()))
        bad = np.flatnonzero(dev > tol)
        if witness is None and bad.size:
            i = int(bad[0])
            witness = {"ancilla_dim": Z.dim, "state": taus[i], "effect": mus[i],
                       "p_first": float(px[i]), "p_second": float(py[i])}
    return ProbeResult(witness is None, worst, total, witness, dims)


# -- canonical classes -------------------------------------------------------

class CanonicalClass:
    """Equivalence class carried by a canonical matrix; equal within ATOL."""

    __slots__ = ("theory", "rep", "canon")
    __hash__ = None

    def __init__(self, theory: TheorySpec, rep, canon: np.ndarray):
        self.theory = theory
        self.rep = rep
        self.canon = np.asarray(canon)

    @property
    def dom(self):
        return self.rep.dom

    @property
    def cod(self):
        return self.rep.cod

    def distance(self, other: "CanonicalClass") -> float:
        if self.canon.shape != other.canon.shape:
            return math.inf
        return max_abs(self.canon - other.canon)

    def __eq__(self, other):
        if not isinstance(other, CanonicalClass):
            return NotImplemented
        return self.distance(other) <= ATOL

    def __repr__(self):
        return f"CanonicalClass({self.rep.dom!r} -> {self.rep.cod!r}, canon={self.canon.tolist()})"


def canonical_matrix(t: TheorySpec, f) -> np.ndarray:
    rule = t.rule
    if isinstance(rule, BornPower):
        if isinstance(f, CPMap):
            return f.choi
        return la.choi(f)
    if isinstance(rule, TraceRule):
        return t.category.embed(f).choi
    if isinstance(rule, StochasticInner):
        return np.asarray(f.mat)
    raise UnsupportedTheory(f"no canonical form registered for rule {rule.describe()}")


def canonicalize(t: TheorySpec, f) -> CanonicalClass:
    """Canonical class of a morphism (or triple, via its collapse)."""
    rep = g_collapse(f) if isinstance(f, GTriple) else f
    return CanonicalClass(t, rep, canonical_matrix(t, rep))


def q_compose(x: CanonicalClass, y: CanonicalClass) -> CanonicalClass:
    t = x.theory
    return canonicalize(t, t.category.compose(x.rep, y.rep))


def q_tensor(x: CanonicalClass, y: CanonicalClass) -> CanonicalClass:
    t = x.theory
    return canonicalize(t, t.category.tensor(x.rep, y.rep))


def q_prob(s: CanonicalClass, e: CanonicalClass) -> float:
    return prob(s.theory, s.rep, e.rep)


def lambda_Q(x: CanonicalClass) -> float:
    from .theory import lambda_scalar
    return lambda_scalar(x.theory, x.rep)


def theta_Q(t: TheorySpec, p: float) -> CanonicalClass:
    """A scalar class whose lambda value is p."""
    if not (p >= 0 and math.isfinite(p)):
        raise OutOfRange(f"theta_Q needs a finite p >= 0, got {p}")
    rule = t.rule
    if isinstance(rule, BornPower):
        return canonicalize(t, t.category.scalar(p ** (1.0 / rule.k)))
    if isinstance(rule, (TraceRule, StochasticInner)):
        return canonicalize(t, t.category.scalar(p))
    raise UnsupportedTheory(f"theta_Q undefined for rule {rule.describe()}")


def q_variant(t: TheorySpec, f, rng: np.random.Generator):
    """A different representative of the class of f in a simplified theory.

    Amplitude rules get a global phase; CP maps are rebuilt from a randomly
    mixed Kraus decomposition of their Choi matrix.
    """
    if isinstance(f, CPMap):
        ks = la.kraus_from_choi(f.choi, (f.dom.dim, f.cod.dim))
        if ks.is_zero:
            return CPMap(f.dom, f.cod, np.zeros_like(f.choi))
        r = len(ks) + 1
        ops = np.stack([k.mat for k, _ in ks.items] + [np.zeros((f.cod.dim, f.dom.dim))])
        v = la.random_unitary(r, rng).mat
        mixed = np.einsum("ji,imn->jmn", v, ops)
        from . import kernels
        return CPMap(f.dom, f.cod, kernels.choi_sum(mixed, np.ones(r)))
    if isinstance(t.rule, BornPower):
        return f.scaled(np.exp(2j * np.pi * rng.random()))
    return Morphism(f.dom, f.cod, f.mat.copy())
