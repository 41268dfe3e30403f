"""Weighted morphism sets, their probabilities, and the noisy quotient.

A :class:`~bornforge.linalg.WeightedSet` is a formal positive combination of
base morphisms; the empty set is the zero morphism.  Sets are never merged:
class equality is decided on the canonical matrix ``sum_i w_i choi(f_i)``
(available for k = 2 amplitude theories and for CP maps) or by probing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from . import linalg as la
from .categories import CHOI, CPMap, category_of, relabel
from .errors import NotSimplified, ObjectMismatch, OutOfRange, UnsupportedTheory
from .linalg import ATOL, PROBE_TOL, UNIT, WeightedSet, as_object, max_abs
from .quotient import DEFAULT_PROBE_DIMS, ProbeResult
from .theory import BornPower, TheorySpec, TraceRule, batch_prob, raw_prob

NO_CANONICAL_FORM = "no canonical form known"


# -- summed category ---------------------------------------------------------

def ws_compose(a: WeightedSet, b: WeightedSet) -> WeightedSet:
    """a . b: every pairwise composite, weights multiplied."""
    if b.cod != a.dom:
        raise ObjectMismatch(f"cannot compose: b.cod={b.cod!r} but a.dom={a.dom!r}")
    items = tuple((category_of(f).compose(g, f), v * w) for g, v in a.items for f, w in b.items)
    return WeightedSet(b.dom, a.cod, items)


def ws_tensor(a: WeightedSet, b: WeightedSet) -> WeightedSet:
    items = tuple((category_of(f).tensor(f, g), v * w) for f, v in a.items for g, w in b.items)
    return WeightedSet(a.dom @ b.dom, a.cod @ b.cod, items)


def ws_union(a: WeightedSet, b: WeightedSet) -> WeightedSet:
    """Formal sum: concatenation, no merging."""
    if a.dom != b.dom or a.cod != b.cod:
        raise ObjectMismatch(f"union of {a.dom!r}->{a.cod!r} and {b.dom!r}->{b.cod!r}")
    return WeightedSet(a.dom, a.cod, a.items + b.items)


def ws_identity(t: TheorySpec, obj) -> WeightedSet:
    return WeightedSet.single(t.category.identity(as_object(obj)))


def ws_unit(t: TheorySpec) -> WeightedSet:
    """The scalar {(1_I, 1)}."""
    return WeightedSet.single(t.unit_state)


def ws_embed(t: TheorySpec, f, w: float = 1.0) -> WeightedSet:
    return WeightedSet.single(t.category.embed(f), w)


def _require_simplified(base: TheorySpec):
    if not base.simplified:
        raise NotSimplified(f"summed probabilities need a simplified base; {base.name} is not")


def prob_S(rho: WeightedSet, sigma: WeightedSet, base: TheorySpec) -> float:
    """sum_ij w_i v_j P(rho_i, sigma_j); zero if either set is empty."""
    _require_simplified(base)
    if not rho.dom.dim == 1 or not sigma.cod.dim == 1:
        raise ObjectMismatch("prob_S needs a state set and an effect set")
    if rho.cod != sigma.dom:
        raise ObjectMismatch(f"state on {rho.cod!r} cannot meet effect on {sigma.dom!r}")
    if rho.is_zero or sigma.is_zero:
        return 0.0
    cat = base.category
    rule = base.rule
    if not rule.linear:
        return float(sum(w * v * raw_prob(base, r, s)
                         for r, w in rho.items for s, v in sigma.items))
    S = np.stack([cat.vec_state(r) for r, _ in rho.items])
    E = np.stack([cat.vec_effect(s) for s, _ in sigma.items])
    if isinstance(rule, BornPower):
        return float(kernels.weighted_born_sum(S, rho.weights, E, sigma.weights, rule.k))
    amp = rule.from_amplitude(E @ S.T)
    return float(sigma.weights @ amp @ rho.weights)


def lambda_S(gamma: WeightedSet, base: TheorySpec) -> float:
    """sum_i w_i lambda(gamma_i) = P_S({(1_I, 1)}, gamma)."""
    if gamma.dom.dim != 1 or gamma.cod.dim != 1:
        raise ObjectMismatch("lambda_S takes a scalar set")
    return prob_S(ws_unit(base), gamma, base)


# -- noisy quotient ----------------------------------------------------------

class NoisyClass:
    """Class of a weighted set, carried by its summed Choi matrix."""

    __slots__ = ("theory", "rep", "canon")
    __hash__ = None

    def __init__(self, theory: TheorySpec, rep: WeightedSet, canon: np.ndarray):
        self.theory = theory
        self.rep = rep
        self.canon = np.asarray(canon)

    def distance(self, other: "NoisyClass") -> float:
        if self.canon.shape != other.canon.shape:
            return math.inf
        return max_abs(self.canon - other.canon)

    def __eq__(self, other):
        if not isinstance(other, NoisyClass):
            return NotImplemented
        return self.distance(other) <= ATOL

    @property
    def is_scalar(self) -> bool:
        return self.rep.dom.dim == 1 and self.rep.cod.dim == 1

    def __repr__(self):
        return f"NoisyClass({self.rep.dom!r} -> {self.rep.cod!r}, canon={self.canon.tolist()})"


def has_noisy_canonical(base: TheorySpec) -> bool:
    rule = base.rule
    return (isinstance(rule, BornPower) and rule.k == 2.0) or isinstance(rule, TraceRule)


def summed_choi(ws: WeightedSet) -> np.ndarray:
    n = ws.dom.dim * ws.cod.dim
    if ws.is_zero:
        return np.zeros((n, n), dtype=complex)
    first = ws.items[0][0]
    if isinstance(first, CPMap):
        return sum(w * f.choi for f, w in ws.items)
    mats = np.stack([f.mat for f, _ in ws.items])
    return kernels.choi_sum(mats, ws.weights)


def noisy_canonical(ws: WeightedSet, base: TheorySpec) -> NoisyClass:
    """Class of ``ws``: canon = sum_i w_i choi(f_i)."""
    if not has_noisy_canonical(base):
        raise UnsupportedTheory(f"{base.name}: {NO_CANONICAL_FORM}; use probe mode")
    return NoisyClass(base, ws, summed_choi(ws))


def lambda_N(x: NoisyClass) -> float:
    if not x.is_scalar:
        raise ObjectMismatch("lambda_N takes a scalar class")
    return float(x.canon[0, 0].real)


def theta_N(p: float, base: TheorySpec) -> NoisyClass:
    """The scalar class {(1_I, p)} (the zero set for p = 0)."""
    if not (p >= 0 and math.isfinite(p)):
        raise OutOfRange(f"theta_N needs a finite p >= 0, got {p}")
    if p == 0:
        return noisy_canonical(WeightedSet.zero(UNIT, UNIT), base)
    return noisy_canonical(WeightedSet.single(base.unit_state, p), base)


def _probe_values(ws: WeightedSet, base: TheorySpec, Z, taus, mus) -> np.ndarray:
    cat = base.category
    out = np.zeros(len(taus))
    for f, w in ws.items:
        out += w * batch_prob(base, mus, cat.tensor(f, cat.identity(Z)), taus)
    return out


def equiv_noisy(a: WeightedSet, b: WeightedSet, base: TheorySpec, mode: str = "canonical",
                n_samples: int = 200, rng: np.random.Generator = None,
                dims: Sequence[int] = DEFAULT_PROBE_DIMS, tol: float = None) -> ProbeResult:
    """Compare two weighted sets by canonical matrix or by singleton probes."""
    if a.dom != b.dom or a.cod != b.cod:
        raise ObjectMismatch(f"{a.dom!r}->{a.cod!r} vs {b.dom!r}->{b.cod!r}")
    if mode == "canonical":
        tol = ATOL if tol is None else tol
        dev = noisy_canonical(a, base).distance(noisy_canonical(b, base))
        return ProbeResult(dev <= tol, dev, 0, None if dev <= tol else {"choi_max_diff": dev}, ())
    if mode != "probe":
        raise ValueError(f"mode must be 'canonical' or 'probe', got {mode!r}")
    _require_simplified(base)
    tol = PROBE_TOL if tol is None else tol
    rng = np.random.default_rng(0) if rng is None else rng
    s = base.sampler
    groups = {}
    for idx in range(n_samples):
        Z = as_object(dims[idx % len(dims)])
        taus, mus = groups.setdefault(Z, ([], []))
        taus.append(s.state(a.dom @ Z, rng))
        mus.append(s.effect(a.cod @ Z, rng))
    worst, witness = 0.0, None
    for Z, (taus, mus) in groups.items():
        pa, pb = _probe_values(a, base, Z, taus, mus), _probe_values(b, base, Z, taus, mus)
        dev = np.abs(pa - pb)
        worst = max(worst, float(dev.max()))
        bad = np.flatnonzero(dev > tol)
        if witness is None and bad.size:
            i = int(bad[0])
            witness = {"ancilla_dim": Z.dim, "state": taus[i], "effect": mus[i],
                       "p_first": float(pa[i]), "p_second": float(pb[i])}
    return ProbeResult(witness is None, worst, n_samples, witness, tuple(dims))


# -- semiring checks ---------------------------------------------------------

@dataclass
class LawResult:
    law: str
    passed: bool
    samples: int
    worst_deviation: float
    counterexample: Optional[dict] = None


@dataclass
class SemiringReport:
    passed: bool
    laws: list = field(default_factory=list)
    canonical: bool = True
    note: str = ""

    def __bool__(self):
        return self.passed

    def law(self, name: str) -> LawResult:
        for r in self.laws:
            if r.law == name:
                return r
        raise KeyError(name)


def random_scalar_set(base: TheorySpec, rng: np.random.Generator, max_items: int = 3) -> WeightedSet:
    n = int(rng.integers(0, max_items + 1))
    items = tuple((base.sampler.scalar(rng), float(rng.uniform(0.1, 2.0))) for _ in range(n))
    return WeightedSet(UNIT, UNIT, items)


class _Law:
    def __init__(self, name):
        self.name, self.n, self.worst, self.cx = name, 0, 0.0, None

    def record(self, dev, tol, **ctx):
        self.n += 1
        if dev > self.worst:
            self.worst = dev
        if dev > tol and self.cx is None:
            self.cx = dict(ctx, deviation=dev)

    def result(self):
        return LawResult(self.name, self.cx is None, self.n, self.worst, self.cx)


def semiring_check(base: TheorySpec, n_samples: int = 200, rng: np.random.Generator = None,
                   tol: float = ATOL, lambda_fn: Callable = None) -> SemiringReport:
    """Semiring laws of scalar weighted sets and homomorphism laws of lambda_S.

    ``lambda_fn`` replaces lambda_S (a map from scalar sets to reals) in the
    homomorphism laws; it exists so planted faults can be checked.

    Class equality uses the summed Choi matrix when one exists and the value
    of lambda_S otherwise (for scalars the two coincide).
    """
    _require_simplified(base)
    rng = np.random.default_rng(0) if rng is None else rng
    canonical = has_noisy_canonical(base)

    lam = lambda_fn or (lambda x: lambda_S(x, base))

    def dist(x, y):
        if canonical:
            return noisy_canonical(x, base).distance(noisy_canonical(y, base))
        return abs(lambda_S(x, base) - lambda_S(y, base))

    zero, one = WeightedSet.zero(UNIT, UNIT), ws_unit(base)
    names = ["union_commutative", "union_associative", "union_unit", "tensor_associative",
             "tensor_commutative", "tensor_unit", "distributive_left", "distributive_right",
             "zero_annihilates", "lambda_additive", "lambda_multiplicative", "lambda_zero",
             "lambda_unit"]
    laws = {n: _Law(n) for n in names}
    laws["lambda_zero"].record(abs(lam(zero)), tol)
    laws["lambda_unit"].record(abs(lam(one) - 1.0), tol)
    for _ in range(n_samples):
        a, b, c = (random_scalar_set(base, rng) for _ in range(3))
        ctx = {"a": a, "b": b, "c": c}
        laws["union_commutative"].record(dist(ws_union(a, b), ws_union(b, a)), tol, **ctx)
        laws["union_associative"].record(
            dist(ws_union(ws_union(a, b), c), ws_union(a, ws_union(b, c))), tol, **ctx)
        laws["union_unit"].record(max(dist(ws_union(a, zero), a), dist(ws_union(zero, a), a)), tol, **ctx)
        laws["tensor_associative"].record(
            dist(ws_tensor(ws_tensor(a, b), c), ws_tensor(a, ws_tensor(b, c))), tol, **ctx)
        laws["tensor_commutative"].record(dist(ws_tensor(a, b), ws_tensor(b, a)), tol, **ctx)
        laws["tensor_unit"].record(max(dist(ws_tensor(a, one), a), dist(ws_tensor(one, a), a)), tol, **ctx)
        laws["distributive_left"].record(
            dist(ws_tensor(c, ws_union(a, b)), ws_union(ws_tensor(c, a), ws_tensor(c, b))), tol, **ctx)
        laws["distributive_right"].record(
            dist(ws_tensor(ws_union(a, b), c), ws_union(ws_tensor(a, c), ws_tensor(b, c))), tol, **ctx)
        annihilated = ws_tensor(zero, a).is_zero and ws_tensor(a, zero).is_zero
        laws["zero_annihilates"].record(0.0 if annihilated else math.inf, tol, **ctx)
        la_, lb = lam(a), lam(b)
        laws["lambda_additive"].record(abs(lam(ws_union(a, b)) - (la_ + lb)), tol, **ctx)
        laws["lambda_multiplicative"].record(abs(lam(ws_tensor(a, b)) - la_ * lb), tol, **ctx)
    results = [laws[n].result() for n in names]
    return SemiringReport(all(r.passed for r in results), results, canonical,
                          "" if canonical else f"{NO_CANONICAL_FORM}; classes compared by lambda_S")


# -- rigidity ----------------------------------------------------------------

@dataclass
class RigidityReport:
    passed: bool
    points: list = field(default_factory=list)
    worst_deviation: float = 0.0
    naturals_ok: bool = True
    order_ok: bool = True

    def __bool__(self):
        return self.passed


def scalar_set_with_value(r: float, rng: np.random.Generator, base: TheorySpec = None) -> WeightedSet:
    """A multi-item scalar set for the k = 2 amplitude theory with lambda_S = r.

    Rationals m/n use m copies of a random-phase scalar of modulus 1/sqrt(n);
    other reals split r across 1-4 random-phase items.
    """
    from fractions import Fraction
    if r == 0:
        return WeightedSet.zero(UNIT, UNIT)
    q = Fraction(r).limit_denominator(20)
    if abs(float(q) - r) < 1e-15 and q.numerator <= 60:
        z = 1.0 / math.sqrt(q.denominator)
        items = tuple((la.scalar(z * np.exp(2j * np.pi * rng.random())), 1.0)
                      for _ in range(q.numerator))
        return WeightedSet(UNIT, UNIT, items)
    n = int(rng.integers(1, 5))
    share = rng.dirichlet(np.ones(n)) * r
    items = []
    for s in share:
        mod = rng.uniform(0.3, 1.5)
        items.append((la.scalar(mod * np.exp(2j * np.pi * rng.random())), s / mod ** 2))
    return WeightedSet(UNIT, UNIT, tuple(items))


def rigidity_points(n_points: int, rng: np.random.Generator) -> list:
    fixed = [0.0, 1.0, 0.5, 1.0 / 3.0, 0.847, 7.0 / 3.0]
    pts = list(fixed)
    while len(pts) < n_points:
        if len(pts) % 2 == 0:
            m, n = int(rng.integers(0, 21)), int(rng.integers(1, 21))
            pts.append(m / n)
        else:
            pts.append(float(rng.uniform(0, 5)))
    return pts[:n_points]


def rigidity_check(n_points: int = 50, rng: np.random.Generator = None,
                   tol: float = ATOL, base: TheorySpec = None) -> RigidityReport:
    """lambda_N on constructed classes returns the value they were built for."""
    from .theory import builtin
    base = base or builtin("fhilb", k=2)
    rng = np.random.default_rng(0) if rng is None else rng
    points, worst = [], 0.0
    values = []
    for r in rigidity_points(n_points, rng):
        x = noisy_canonical(scalar_set_with_value(r, rng, base), base)
        v = lambda_N(x)
        dev = abs(v - r)
        rt = abs(lambda_N(theta_N(r, base)) - r)
        same = x == theta_N(r, base)
        worst = max(worst, dev, rt)
        points.append({"r": r, "lambda_N": v, "deviation": dev, "theta_round_trip": same})
        values.append((r, v))
    naturals_ok = True
    for n in range(1, 21):
        x = noisy_canonical(WeightedSet(UNIT, UNIT, ((base.unit_state, 1.0),) * n), base)
        d = abs(lambda_N(x) - n)
        worst = max(worst, d)
        naturals_ok &= d <= tol
    order_ok = all((r1 < r2) == (v1 < v2) for (r1, v1) in values for (r2, v2) in values
                   if abs(r1 - r2) > 10 * tol)
    passed = (all(p["deviation"] <= tol and p["theta_round_trip"] for p in points)
              and naturals_ok and order_ok)
    return RigidityReport(passed, points, worst, naturals_ok, order_ok)


# -- samplers and redundancy generators -------------------------------------

def random_weighted_set(base: TheorySpec, dom, cod, rng: np.random.Generator,
                        max_items: int = 3, allow_empty: bool = False) -> WeightedSet:
    """Random set of sampled base morphisms with weights in U[0.1, 2]."""
    dom, cod = as_object(dom), as_object(cod)
    s = base.sampler
    n = int(rng.integers(0 if allow_empty else 1, max_items + 1))
    items = []
    for _ in range(n):
        if dom.dim == 1 and cod.dim == 1:
            m = s.scalar(rng)
        elif dom.dim == 1:
            m = s.state(cod, rng)
        elif cod.dim == 1:
            m = s.effect(dom, rng)
        else:
            m = s.process(dom, cod, rng)
        items.append((relabel(m, dom, cod), float(rng.uniform(0.1, 2.0))))
    return WeightedSet(dom, cod, tuple(items))


def noisy_variant(ws: WeightedSet, base: TheorySpec, rng: np.random.Generator) -> WeightedSet:
    """A different set with the same summed Choi matrix.

    Matrix items are turned into Kraus operators sqrt(w) f, mixed by a random
    unitary (with one extra zero operator) and carried with random weights;
    CP items are split in two with rescaled Choi matrices.
    """
    if ws.is_zero:
        return ws
    first = ws.items[0][0]
    if isinstance(first, CPMap):
        items = []
        for f, w in ws.items:
            c = float(rng.uniform(0.2, 0.8))
            items.append((CPMap(f.dom, f.cod, f.choi * 2.0), w * c / 2.0))
            items.append((f, w * (1 - c)))
        return WeightedSet(ws.dom, ws.cod, tuple(items))
    ops = [math.sqrt(w) * f.mat for f, w in ws.items]
    ops.append(np.zeros_like(ops[0]))
    v = la.random_unitary(len(ops), rng).mat
    mixed = np.einsum("ji,imn->jmn", v, np.stack(ops))
    items = []
    for op in mixed:
        if max_abs(op) < 1e-12:
            continue
        w = float(rng.uniform(0.5, 2.0))
        items.append((la.Morphism(ws.dom, ws.cod, op / math.sqrt(w)), w))
    return WeightedSet(ws.dom, ws.cod, tuple(items))


def same_items(a: WeightedSet, b: WeightedSet, tol: float = 1e-12) -> float:
    """0 if a and b hold the same (morphism, weight) items up to order, else inf.

    Returns the worst matched deviation, or inf when no matching exists.
    """
    if len(a) != len(b) or a.dom != b.dom or a.cod != b.cod:
        return math.inf
    left = list(b.items)
    worst = 0.0
    for f, w in a.items:
        best, best_j = math.inf, None
        for j, (g, v) in enumerate(left):
            d = max(abs(w - v), max_abs(f.mat - g.mat))
            if d < best:
                best, best_j = d, j
        if best_j is None or best > tol:
            return math.inf
        worst = max(worst, best)
        left.pop(best_j)
    return worst
