"""Probabilistic process theories: rules, membership, samplers, axiom checks.

A :class:`TheorySpec` bundles a concrete category, the physical subsets of
processes/states/effects, a probability rule and a sampler for the checks.
Built-ins: ``fhilb`` (any ``k > 0``), ``textbook`` (unitaries, unit kets and
bras, k = 2), ``cp`` (Choi-encoded CP maps, trace rule) and ``stoch``
(nonnegative matrices with column-stochastic dynamics).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from . import kernels
from . import linalg as la
from .categories import CHOI, MATRIX, CPMap, MatrixCategory, ChoiCategory
from .errors import (
    BadParams, NoDiscard, NotMember, NotSimplified, ObjectMismatch, SamplerUnavailable,
)
from .linalg import UNIT, Morphism, TheoryObject, as_object, max_abs

MEMBER_TOL = 1e-8


# -- probability rules -------------------------------------------------------

@dataclass(frozen=True)
class BornPower:
    """P = |<sigma|rho>|**k."""

    k: float = 2.0
    linear = True

    def __post_init__(self):
        k = float(self.k)
        if not (k > 0 and math.isfinite(k)):
            raise BadParams(f"BornPower needs a finite k > 0, got {self.k}")
        object.__setattr__(self, "k", k)

    def from_amplitude(self, a):
        return np.abs(a) ** self.k

    def batch(self, E, W, R):
        return kernels.born_batch(E, W, R, self.k)

    def describe(self) -> str:
        return f"born k={self.k:g}"


@dataclass(frozen=True)
class TraceRule:
    """P = Tr[rho e], read off the Choi-encoded scalar."""

    linear = True

    def from_amplitude(self, a):
        return np.real(a)

    def batch(self, E, W, R):
        return np.real(kernels.sandwich_batch(E, W, R))

    def describe(self) -> str:
        return "trace"


@dataclass(frozen=True)
class StochasticInner:
    """P = sigma . rho for nonnegative vectors."""

    linear = True

    def from_amplitude(self, a):
        return np.real(a)

    def batch(self, E, W, R):
        return np.real(kernels.sandwich_batch(E, W, R))

    def describe(self) -> str:
        return "stochastic"


@dataclass(frozen=True)
class Custom:
    """Arbitrary rule ``fn(state, effect) -> float`` (used for planted faults)."""

    fn: Callable[[Any, Any], float]
    label: str = "custom"
    linear = False

    def describe(self) -> str:
        return self.label


ProbabilityRule = Union[BornPower, TraceRule, StochasticInner, Custom]


# -- samplers ----------------------------------------------------------------

class Sampler:
    """Random members of a theory's physical sets.

    Subclasses implement ``state``, ``effect``, ``process`` and ``scalar``.
    Objects are drawn with at most ``max_wires`` factors of dimension at most
    ``max_dim`` and total dimension at most ``max_total``.
    """

    measure = "unspecified"
    small_dims = (1, 2, 3)

    def __init__(self, max_dim: int = 4, max_wires: int = 3, max_total: int = 8):
        self.max_dim = max_dim
        self.max_wires = max_wires
        self.max_total = max_total

    def random_object(self, rng: np.random.Generator, max_total: int = None) -> TheoryObject:
        cap = self.max_total if max_total is None else max_total
        factors = []
        for _ in range(int(rng.integers(1, self.max_wires + 1))):
            d = int(rng.integers(1, self.max_dim + 1))
            if math.prod(factors) * d > cap:
                break
            factors.append(d)
        if not factors:
            factors = [int(rng.integers(1, min(self.max_dim, cap) + 1))]
        return TheoryObject(tuple(factors))

    def process_codomain(self, dom: TheoryObject, rng: np.random.Generator) -> TheoryObject:
        return self.random_object(rng)

    def causal_state(self, obj, rng):
        raise SamplerUnavailable(f"{type(self).__name__} has no causal-state sampler")

    def basis_state(self, obj, i: int):
        obj = as_object(obj)
        v = np.zeros(obj.dim)
        v[i] = 1
        return la.state(v, obj)

    def basis_effect(self, obj, j: int):
        obj = as_object(obj)
        v = np.zeros(obj.dim)
        v[j] = 1
        return la.effect(v, obj)


class FHilbSampler(Sampler):
    measure = "Haar unit vectors scaled by U[0.5,1.5]; Ginibre/sqrt(dim) processes; scalars r*e^{i phi}, r~U[0,1.5]"

    def state(self, obj, rng):
        return la.random_state(obj, rng).scaled(rng.uniform(0.5, 1.5))

    def effect(self, obj, rng):
        return la.random_effect(obj, rng).scaled(rng.uniform(0.5, 1.5))

    def process(self, dom, cod, rng):
        return la.random_matrix(dom, cod, rng)

    def scalar(self, rng):
        return la.scalar(rng.uniform(0, 1.5) * np.exp(2j * np.pi * rng.random()))


class TextbookSampler(Sampler):
    measure = "Haar unit kets and bras; Haar unitaries; unit-modulus scalars"

    def state(self, obj, rng):
        return la.random_state(obj, rng)

    def effect(self, obj, rng):
        return la.random_effect(obj, rng)

    def process(self, dom, cod, rng):
        dom, cod = as_object(dom), as_object(cod)
        if dom.dim != cod.dim:
            raise SamplerUnavailable("unitaries need equal dimensions")
        return Morphism(dom, cod, la.random_unitary(dom.dim, rng).mat)

    def process_codomain(self, dom, rng):
        return dom

    def scalar(self, rng):
        return la.scalar(np.exp(2j * np.pi * rng.random()))


class CPSampler(Sampler):
    measure = "Wishart densities scaled by U[0.5,1.5]; PSD effects with norm U[0.2,1]; 1-3 Ginibre Kraus operators; scalars U[0,1.5]"

    small_dims = (1, 2)

    def __init__(self, max_dim: int = 4, max_wires: int = 3, max_total: int = 4):
        super().__init__(max_dim, max_wires, max_total)

    def state(self, obj, rng):
        obj = as_object(obj)
        return CPMap.from_density(la.random_density(obj.dim, rng) * rng.uniform(0.5, 1.5), obj)

    def causal_state(self, obj, rng):
        obj = as_object(obj)
        return CPMap.from_density(la.random_density(obj.dim, rng), obj)

    def effect(self, obj, rng):
        obj = as_object(obj)
        return CPMap.from_effect_operator(la.random_psd(obj.dim, rng, rng.uniform(0.2, 1.0)), obj)

    def process(self, dom, cod, rng):
        dom, cod = as_object(dom), as_object(cod)
        r = int(rng.integers(1, 4))
        ops = [la.random_matrix(dom, cod, rng).mat / math.sqrt(r) for _ in range(r)]
        return CPMap(dom, cod, kernels.choi_sum(np.stack(ops), np.ones(r)))

    def scalar(self, rng):
        return CHOI.scalar(rng.uniform(0, 1.5))

    def basis_state(self, obj, i):
        return CHOI.embed(super().basis_state(obj, i))

    def basis_effect(self, obj, j):
        return CHOI.embed(super().basis_effect(obj, j))


class StochSampler(Sampler):
    measure = "Dirichlet(1) vectors scaled by U[0.5,1]; U[0,1] effect entries; Dirichlet(1) columns"

    def state(self, obj, rng):
        obj = as_object(obj)
        return la.state(rng.dirichlet(np.ones(obj.dim)) * rng.uniform(0.5, 1.0), obj)

    def causal_state(self, obj, rng):
        obj = as_object(obj)
        return la.state(rng.dirichlet(np.ones(obj.dim)), obj)

    def effect(self, obj, rng):
        obj = as_object(obj)
        return la.effect(rng.random(obj.dim), obj)

    def process(self, dom, cod, rng):
        dom, cod = as_object(dom), as_object(cod)
        return Morphism(dom, cod, rng.dirichlet(np.ones(cod.dim), size=dom.dim).T)

    def scalar(self, rng):
        return la.scalar(rng.uniform(0, 1.0))


# -- theories ----------------------------------------------------------------

def _always(_m) -> bool:
    return True


@dataclass(frozen=True, eq=False)
class TheorySpec:
    """A probabilistic process theory evaluated on concrete matrices."""

    name: str
    category: Union[MatrixCategory, ChoiCategory]
    rule: ProbabilityRule
    simplified: bool
    process_member: Callable[[Any], bool] = _always
    state_member: Callable[[Any], bool] = _always
    effect_member: Callable[[Any], bool] = _always
    object_policy: Callable[[TheoryObject], bool] = _always
    sampler: Optional[Sampler] = None
    witnesses: tuple = ()
    discard: Optional[Callable[[TheoryObject], Any]] = None
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def with_rule(self, rule: ProbabilityRule, name: str = None) -> "TheorySpec":
        return dataclasses.replace(self, rule=rule, name=name or f"{self.name}[{rule.describe()}]")

    @property
    def unit_state(self):
        return self.category.unit_state()

    @property
    def k(self) -> Optional[float]:
        return self.rule.k if isinstance(self.rule, BornPower) else None

    def __repr__(self):
        return f"TheorySpec({self.name!r}, rule={self.rule.describe()}, simplified={self.simplified})"


def _check_type(t: TheorySpec, m, what: str):
    if not isinstance(m, t.category.morphism_type):
        raise NotMember(f"{what} is a {type(m).__name__}, expected {t.category.morphism_type.__name__}")


def check_state(t: TheorySpec, rho):
    _check_type(t, rho, "state")
    if not rho.is_state:
        raise ObjectMismatch(f"state must have trivial domain, got {rho.dom!r}")
    if not t.state_member(rho):
        raise NotMember(f"state is not physical in {t.name}")


def check_effect(t: TheorySpec, sigma):
    _check_type(t, sigma, "effect")
    if not sigma.is_effect:
        raise ObjectMismatch(f"effect must have trivial codomain, got {sigma.cod!r}")
    if not t.effect_member(sigma):
        raise NotMember(f"effect is not physical in {t.name}")


def raw_prob(t: TheorySpec, rho, sigma) -> float:
    """Evaluate the rule without membership checks."""
    if rho.cod != sigma.dom:
        raise ObjectMismatch(f"state on {rho.cod!r} cannot meet effect on {sigma.dom!r}")
    if isinstance(t.rule, Custom):
        return float(t.rule.fn(rho, sigma))
    z = t.category.compose(sigma, rho).value
    return float(t.rule.from_amplitude(z))


def prob(t: TheorySpec, rho, sigma) -> float:
    """P(rho, sigma) for physical rho and sigma on the same object."""
    check_state(t, rho)
    check_effect(t, sigma)
    return raw_prob(t, rho, sigma)


def lambda_scalar(t: TheorySpec, gamma) -> float:
    """lambda(gamma) = P(1_I, gamma), defined for simplified theories."""
    if not t.simplified:
        raise NotSimplified(f"{t.name} is not simplified; use the G construction")
    if not gamma.is_scalar:
        raise ObjectMismatch("lambda_scalar takes a scalar")
    return prob(t, t.unit_state, gamma)


def batch_prob(t: TheorySpec, effects, f, states) -> np.ndarray:
    """P(f . states[n], effects[n]) for each n, through the linear read-off."""
    cat = t.category
    if not t.rule.linear:
        return np.array([raw_prob(t, cat.compose(f, s), e) for s, e in zip(states, effects)])
    if not states:
        return np.zeros(0)
    E = np.stack([cat.vec_effect(e) for e in effects])
    R = np.stack([cat.vec_state(s) for s in states])
    return np.asarray(t.rule.batch(E, cat.linear(f), R), dtype=float)


# -- axiom checks ------------------------------------------------------------

@dataclass
class AxiomReport:
    axiom: str
    passed: bool
    samples: int
    worst_deviation: float
    counterexample: Optional[dict] = None
    witnesses: dict = field(default_factory=dict)
    measure: str = ""

    def __bool__(self):
        return self.passed


def _require_sampler(t: TheorySpec) -> Sampler:
    if t.sampler is None:
        raise SamplerUnavailable(f"{t.name} has no sampler")
    return t.sampler


def _axiom_one(t, n, rng, tol):
    s = _require_sampler(t)
    cat = t.category
    worst, cx = 0.0, None
    for _ in range(n):
        a = s.random_object(rng)
        b = s.process_codomain(a, rng)
        rho, f, sigma = s.state(a, rng), s.process(a, b, rng), s.effect(b, rng)
        lhs = prob(t, cat.compose(f, rho), sigma)
        rhs = prob(t, rho, cat.compose(sigma, f))
        dev = abs(lhs - rhs)
        if dev > worst:
            worst = dev
            if dev > tol:
                cx = {"state": rho, "process": f, "effect": sigma, "lhs": lhs, "rhs": rhs}
    return AxiomReport("I", cx is None, n, worst, cx, measure=s.measure)


def _axiom_two(t, n, rng, tol):
    s = _require_sampler(t)
    cat = t.category
    worst, cx = 0.0, None
    for _ in range(n):
        a1, a2 = s.random_object(rng, 4), s.random_object(rng, 4)
        r1, e1, r2, e2 = s.state(a1, rng), s.effect(a1, rng), s.state(a2, rng), s.effect(a2, rng)
        joint = prob(t, cat.tensor(r1, r2), cat.tensor(e1, e2))
        p1, p2 = prob(t, r1, e1), prob(t, r2, e2)
        dev = abs(joint - p1 * p2)
        if dev > worst:
            worst = dev
            if dev > tol and cx is None:
                cx = {"states": (r1, r2), "effects": (e1, e2), "joint": joint, "product": p1 * p2}
    return AxiomReport("II", cx is None, n, worst, cx, measure=s.measure)


def _axiom_three(t, n, rng, tol):
    s = _require_sampler(t)
    pairs = list(t.witnesses)
    found = {}
    count = 0
    for pair in pairs + [None] * n:
        if "nonzero" in found and "non_one" in found:
            break
        if pair is not None:
            rho, sigma = pair
        else:
            a = s.random_object(rng)
            rho, sigma = s.state(a, rng), s.effect(a, rng)
        p = prob(t, rho, sigma)
        count += 1
        if abs(p) > tol and "nonzero" not in found:
            found["nonzero"] = {"state": rho, "effect": sigma, "p": p}
        if abs(p - 1) > tol and "non_one" not in found:
            found["non_one"] = {"state": rho, "effect": sigma, "p": p}
    passed = "nonzero" in found and "non_one" in found
    cx = None if passed else {"missing": [w for w in ("nonzero", "non_one") if w not in found]}
    return AxiomReport("III", passed, count, 0.0, cx, witnesses=found, measure=s.measure)


def check_axiom(t: TheorySpec, which: str, n_samples: int = None,
                rng: np.random.Generator = None, tol: float = la.ATOL) -> AxiomReport:
    """Randomised check of axiom I (associativity), II (products) or III (non-triviality)."""
    rng = np.random.default_rng(0) if rng is None else rng
    which = str(which).upper()
    runner = {"I": _axiom_one, "II": _axiom_two, "III": _axiom_three}.get(which)
    if runner is None:
        raise BadParams(f"unknown axiom {which!r}")
    if n_samples is None:
        n_samples = 256 if which == "III" else 200
    return runner(t, n_samples, rng, tol)


def check_discard(t: TheorySpec, discard: Callable = None, n_samples: int = 200,
                  rng: np.random.Generator = None, tol: float = la.ATOL,
                  state_sampler: Callable = None) -> AxiomReport:
    """Check P(rho, discard) = 1 for sampled causal states, and on the unit."""
    discard = discard or t.discard
    if discard is None:
        raise NoDiscard(f"{t.name} has no discard effects")
    rng = np.random.default_rng(0) if rng is None else rng
    s = _require_sampler(t)
    state_sampler = state_sampler or s.causal_state
    dev = abs(prob(t, t.unit_state, discard(UNIT)) - 1.0)
    worst, cx = dev, None
    if dev > tol:
        cx = {"state": t.unit_state, "p": 1.0 - dev}
    for _ in range(n_samples):
        a = s.random_object(rng)
        rho = state_sampler(a, rng)
        p = prob(t, rho, discard(a))
        dev = abs(p - 1.0)
        if dev > worst:
            worst = dev
        if dev > tol and cx is None:
            cx = {"state": rho, "p": p}
    return AxiomReport("discard", cx is None, n_samples + 1, worst, cx, measure=s.measure)


# -- built-in theories -------------------------------------------------------

def _is_unitary(m) -> bool:
    return (isinstance(m, Morphism) and m.dom.dim == m.cod.dim
            and max_abs(m.mat.conj().T @ m.mat - np.eye(m.dom.dim)) <= MEMBER_TOL)


def _unit_norm(m) -> bool:
    return isinstance(m, Morphism) and abs(np.linalg.norm(m.mat) - 1.0) <= MEMBER_TOL


def _is_cp(m) -> bool:
    if not isinstance(m, CPMap):
        return False
    c = m.choi
    scale = max(1.0, max_abs(c))
    if max_abs(c - c.conj().T) > MEMBER_TOL * scale:
        return False
    return float(np.linalg.eigvalsh((c + c.conj().T) / 2)[0]) >= -MEMBER_TOL * scale


def _nonneg_real(m) -> bool:
    return (isinstance(m, Morphism) and max_abs(m.mat.imag) <= 1e-12
            and float(np.min(m.mat.real, initial=0.0)) >= -1e-12)


def _stoch_process(m) -> bool:
    return _nonneg_real(m) and max_abs(m.mat.real.sum(axis=0) - 1.0) <= MEMBER_TOL


def _stoch_state(m) -> bool:
    return _nonneg_real(m) and float(m.mat.real.sum()) <= 1.0 + MEMBER_TOL


def _stoch_effect(m) -> bool:
    return _nonneg_real(m) and float(np.max(m.mat.real, initial=0.0)) <= 1.0 + MEMBER_TOL


def _qubit_witnesses(sampler: Sampler) -> tuple:
    q = as_object(2)
    s0 = sampler.basis_state(q, 0)
    return ((s0, sampler.basis_effect(q, 0)), (s0, sampler.basis_effect(q, 1)))


BUILTIN_NAMES = ("fhilb", "textbook", "cp", "stoch")
_ALIASES = {"fhilb_k": "fhilb", "textbook_qm": "textbook"}


def builtin(name: str, k: float = 2.0, max_dim: int = 4, max_wires: int = 3) -> TheorySpec:
    """Construct one of the built-in theories by name."""
    name = _ALIASES.get(name, name)
    if name == "fhilb":
        rule = BornPower(k)
        s = FHilbSampler(max_dim, max_wires)
        return TheorySpec(f"fhilb(k={rule.k:g})", MATRIX, rule, True, sampler=s,
                          witnesses=_qubit_witnesses(s), kind="fhilb", params={"k": rule.k})
    if name == "textbook":
        s = TextbookSampler(max_dim, max_wires)
        return TheorySpec("textbook", MATRIX, BornPower(2.0), False,
                          process_member=_is_unitary, state_member=_unit_norm,
                          effect_member=_unit_norm, sampler=s,
                          witnesses=_qubit_witnesses(s), kind="textbook", params={"k": 2.0})
    if name == "cp":
        s = CPSampler(max_dim, max_wires)
        return TheorySpec("cp", CHOI, TraceRule(), True, process_member=_is_cp,
                          state_member=_is_cp, effect_member=_is_cp, sampler=s,
                          witnesses=_qubit_witnesses(s),
                          discard=lambda a: CPMap(as_object(a), UNIT, np.eye(as_object(a).dim)),
                          kind="cp")
    if name == "stoch":
        s = StochSampler(max_dim, max_wires)
        return TheorySpec("stoch", MATRIX, StochasticInner(), False,
                          process_member=_stoch_process, state_member=_stoch_state,
                          effect_member=_stoch_effect, sampler=s,
                          witnesses=_qubit_witnesses(s),
                          discard=lambda a: la.effect(np.ones(as_object(a).dim), a),
                          kind="stoch")
    raise BadParams(f"unknown built-in theory {name!r}; choose from {BUILTIN_NAMES}")
