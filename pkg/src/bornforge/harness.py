"""Claim registry and runner: one randomised or exact check per result.

Each claim owns an RNG split from the root seed by a hash of its id, so
results do not depend on execution order or on how many workers run them.
Failures are verdicts with evidence, never exceptions.
"""
from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import linalg as la
from .categories import CHOI, CPMap
from .errors import BornforgeError, SamplerUnavailable, UndetectedMutant
from .linalg import ATOL, PROBE_TOL, UNIT, WeightedSet, as_object, max_abs
from . import noise as nz
from . import quotient as qt
from .theory import (
    BornPower, Custom, StochasticInner, TheorySpec, TraceRule, builtin, check_axiom,
    check_discard, lambda_scalar, prob, raw_prob,
)

SKIPPED, PASS, FAIL = "skipped", "pass", "fail"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    n_samples: int = 200
    dims: tuple = qt.DEFAULT_PROBE_DIMS
    tol: float = ATOL
    probe_tol: float = PROBE_TOL
    workers: int = 1


@dataclass
class Outcome:
    passed: bool
    max_deviation: float = 0.0
    samples: int = 0
    witness: Any = None
    note: str = ""


@dataclass
class ClaimCheck:
    claim_id: str
    anchor: str
    verdict: str
    max_deviation: Optional[float]
    samples: int
    witness: Any
    seed: int
    note: str = ""


class Skip(Exception):
    """Raised by a runner when the claim does not apply."""


@dataclass(frozen=True)
class Claim:
    claim_id: str
    anchor: str
    runner: Callable
    requires: Callable[[TheorySpec], Optional[str]]


REGISTRY: list = []


def claim(claim_id: str, anchor: str, requires=None):
    def deco(fn):
        REGISTRY.append(Claim(claim_id, anchor, fn, requires or (lambda t: None)))
        return fn
    return deco


def claim_rng(seed: int, claim_id: str) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(claim_id.encode())])


# -- applicability -----------------------------------------------------------

def _simplified(t):
    return None if t.simplified else "requires a simplified theory"


def _canonical(t):
    return "no canonical form registered for this rule" if isinstance(t.rule, Custom) else None


def _simplified_canonical(t):
    return _simplified(t) or _canonical(t)


def _noisy(t):
    return _simplified(t) or (None if nz.has_noisy_canonical(t) else nz.NO_CANONICAL_FORM)


def _kind(*kinds):
    return lambda t: None if t.kind in kinds else f"applies to {'/'.join(kinds)} only"


def _fhilb2(t):
    if t.kind != "fhilb":
        return "applies to fhilb only"
    return None if t.rule.k == 2.0 else nz.NO_CANONICAL_FORM


# -- shared helpers ----------------------------------------------------------

class Ctx:
    def __init__(self, t: TheorySpec, rng: np.random.Generator, cfg: SuiteConfig):
        self.t, self.rng, self.cfg = t, rng, cfg
        self.cat = t.category
        self.s = t.sampler

    @property
    def n(self) -> int:
        return self.cfg.n_samples

    def obj(self, allow_unit: bool = True) -> la.TheoryObject:
        choices = getattr(self.s, "small_dims", (1, 2, 3))
        if not allow_unit:
            choices = tuple(d for d in choices if d > 1)
        return as_object(int(self.rng.choice(choices)))

    def triple_scale(self):
        return ((1,), 4) if self.cat is CHOI else ((1, 2), 8)

    def triple(self, dom, cod) -> qt.GTriple:
        scale, cap = self.triple_scale()
        return qt.random_triple(self.t, dom, cod, self.rng, scale, cap)

    def variant(self, x: qt.GTriple) -> qt.GTriple:
        # Choi matrices grow as the square of the ancilla, so CP pads minimally
        return qt.equivalent_variant(x, self.rng, pad=1 if self.cat is CHOI else 2)

    def process(self, dom, cod):
        dom, cod = as_object(dom), as_object(cod)
        if dom.dim == 1 and cod.dim == 1:
            return self.s.scalar(self.rng)
        if dom.dim == 1:
            return self.s.state(cod, self.rng)
        if cod.dim == 1:
            return self.s.effect(dom, self.rng)
        return self.s.process(dom, cod, self.rng)

    def scalar(self):
        if self.t.simplified:
            return self.s.scalar(self.rng)
        return self.triple(UNIT, UNIT)

    def lam(self, x) -> float:
        return qt.lambda_G(x) if isinstance(x, qt.GTriple) else lambda_scalar(self.t, x)

    def stensor(self, x, y):
        if isinstance(x, qt.GTriple):
            return qt.g_tensor(x, y)
        return self.cat.tensor(x, y)

    def unit_scalar(self):
        if self.t.simplified:
            return self.t.unit_state
        return qt.g_identity(self.t, UNIT)

    def probe(self, f, g, tol=None, dims=None, n=None):
        return qt.equiv_probe(self.t, f, g, n_samples=n or max(20, self.n // 4),
                              dims=dims or self.cfg.dims, rng=self.rng,
                              tol=tol or self.cfg.probe_tol)


class Tally:
    """Accumulates worst deviation and the first counterexample."""

    def __init__(self, tol: float):
        self.tol, self.worst, self.samples, self.witness = tol, 0.0, 0, None

    def add(self, dev: float, **ctx):
        self.samples += 1
        dev = float(dev)
        if not dev <= self.worst:
            self.worst = dev
        if not dev <= self.tol and self.witness is None:
            self.witness = dict(ctx, deviation=dev)

    def flag(self, ok: bool, **ctx):
        self.samples += 1
        if not ok and self.witness is None:
            self.witness = dict(ctx)

    def outcome(self, note: str = "") -> Outcome:
        return Outcome(self.witness is None, self.worst, self.samples, self.witness, note)


def _axiom_outcome(rep) -> Outcome:
    wit = rep.counterexample if not rep.passed else (rep.witnesses or None)
    return Outcome(rep.passed, rep.worst_deviation, rep.samples, wit, rep.measure)


# -- theory-level claims -----------------------------------------------------

@claim("axiom-I", "P(f o rho, sigma) = P(rho, sigma o f) for physical f")
def _c_axiom1(c: Ctx):
    return _axiom_outcome(check_axiom(c.t, "I", c.n, c.rng, c.cfg.tol))


@claim("axiom-II", "P(rho1 (x) rho2, sigma1 (x) sigma2) = P(rho1, sigma1) P(rho2, sigma2)")
def _c_axiom2(c: Ctx):
    return _axiom_outcome(check_axiom(c.t, "II", c.n, c.rng, c.cfg.tol))


@claim("axiom-III", "some pair has P != 0 and some pair has P != 1")
def _c_axiom3(c: Ctx):
    return _axiom_outcome(check_axiom(c.t, "III", max(c.n, 256), c.rng, c.cfg.tol))


@claim("unit-physical", "1_I is a physical state and effect; physical sets are closed under (x)")
def _c_unit_physical(c: Ctx):
    t, tally = c.t, Tally(0.0)
    one = t.unit_state
    tally.flag(t.state_member(one) and t.effect_member(one), case="unit")
    for _ in range(c.n // 4):
        a, b = c.s.random_object(c.rng, 4), c.s.random_object(c.rng, 4)
        r = c.cat.tensor(c.s.state(a, c.rng), c.s.state(b, c.rng))
        e = c.cat.tensor(c.s.effect(a, c.rng), c.s.effect(b, c.rng))
        tally.flag(t.state_member(r) and t.effect_member(e), objects=(a, b))
    return tally.outcome()


@claim("unit-probability", "P(1_I, 1_I) = 1 unless P vanishes identically")
def _c_unit_probability(c: Ctx):
    t = c.t
    one = t.unit_state
    p = prob(t, one, one)
    nonzero = any(prob(t, r, s) > c.cfg.tol for r, s in t.witnesses)
    dev = abs(p - 1.0) if nonzero else 0.0
    zero_rule = t.with_rule(Custom(lambda r, s: 0.0, "zero"))
    p0 = prob(zero_rule, one, one)
    trivial_detected = not check_axiom(zero_rule, "III", 16, c.rng, c.cfg.tol).passed
    ok = dev <= c.cfg.tol and p0 == 0.0 and trivial_detected and nonzero
    return Outcome(ok, dev, 18, None if ok else {"P(1,1)": p, "zero_rule_P(1,1)": p0,
                                                  "nonzero_witness": nonzero})


@claim("discard", "P(rho, discard) = 1 for causal rho")
def _c_discard(c: Ctx):
    if c.t.discard is None:
        raise Skip("theory declares no discard effects")
    try:
        c.s.causal_state(c.s.random_object(c.rng), c.rng)
    except SamplerUnavailable as exc:
        raise Skip(f"no causal states to test: {exc}")
    return _axiom_outcome(check_discard(c.t, None, c.n, c.rng, c.cfg.tol))


@claim("lambda-existence", "P(rho, sigma) = lambda(sigma o rho)")
def _c_lambda_existence(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol)
    for _ in range(c.n):
        a = c.s.random_object(c.rng)
        r, s = c.s.state(a, c.rng), c.s.effect(a, c.rng)
        p = prob(t, r, s)
        if t.simplified:
            lam = lambda_scalar(t, c.cat.compose(s, r))
        else:
            lam = qt.lambda_G(qt.g_compose(qt.g_embed(t, s), qt.g_embed(t, r)))
        tally.add(abs(p - lam), state=r, effect=s, p=p, lam=lam)
    return tally.outcome()


@claim("lambda-homomorphism", "lambda(g1 (x) g2) = lambda(g1) lambda(g2) and lambda(1_I) = 1")
def _c_lambda_hom(c: Ctx):
    tally = Tally(c.cfg.tol)
    tally.add(abs(c.lam(c.unit_scalar()) - 1.0), case="unit")
    for _ in range(c.n):
        x, y = c.scalar(), c.scalar()
        lhs, rhs = c.lam(c.stensor(x, y)), c.lam(x) * c.lam(y)
        tally.add(abs(lhs - rhs), first=x, second=y, lhs=lhs, rhs=rhs)
    return tally.outcome("" if c.t.simplified else "lambda_G on dilation-triple scalars")


def _exponent(t: TheorySpec) -> float:
    if isinstance(t.rule, BornPower):
        return t.rule.k
    if isinstance(t.rule, (TraceRule, StochasticInner)):
        return 1.0
    raise Skip("rule is not in the power family")


@claim("power-rule", "lambda(r e^{i theta}) = r^k")
def _c_power_rule(c: Ctx):
    k = _exponent(c.t)
    tally = Tally(c.cfg.tol)
    for _ in range(c.n):
        x = c.scalar()
        z = qt.g_collapse(x).value if isinstance(x, qt.GTriple) else x.value
        tally.add(abs(c.lam(x) - abs(z) ** k), scalar=z)
    return tally.outcome(f"k={k:g}")


# -- simplified-theory (Q) claims --------------------------------------------

def _random_morphism_pair(c: Ctx, equal: bool, dom=None, cod=None):
    dom = dom or c.obj()
    cod = cod or c.obj(allow_unit=dom.dim != 1)
    if c.t.simplified:
        f = c.process(dom, cod)
        return f, (qt.q_variant(c.t, f, c.rng) if equal else c.process(dom, cod))
    f = c.triple(dom, cod)
    return f, (c.variant(f) if equal else c.triple(dom, cod))


@claim("probe-canonical-agreement", "f ~ g by probing <=> canonical(f) = canonical(g)",
       requires=_canonical)
def _c_probe_canonical(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 2)):
        f, g = _random_morphism_pair(c, equal=i % 2 == 0)
        canon = qt.canonicalize(c.t, f) == qt.canonicalize(c.t, g)
        probe = c.probe(f, g, n=40)
        tally.flag(canon == probe.equivalent, pair=(f, g), canonical=canon,
                   probe=probe.equivalent, probe_deviation=probe.max_deviation)
    return tally.outcome()


@claim("state-equivalence", "rho ~ rho' <=> lambda(sigma o rho) = lambda(sigma o rho') for all sigma",
       requires=_simplified_canonical)
def _c_state_equiv(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 2)):
        a = c.obj(allow_unit=False)
        r1, r2 = _random_morphism_pair(c, i % 2 == 0, UNIT, a)
        effects_only = c.probe(r1, r2, dims=(1,), n=40).equivalent
        full = c.probe(r1, r2, n=40).equivalent
        canon = qt.canonicalize(c.t, r1) == qt.canonicalize(c.t, r2)
        tally.flag(effects_only == full == canon, states=(r1, r2), effects_only=effects_only,
                   ancilla_probe=full, canonical=canon)
    return tally.outcome()


@claim("scalar-factor-through", "P(gamma . rho, sigma) = lambda(gamma) P(rho, sigma)",
       requires=_simplified)
def _c_factor_through(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol)
    for _ in range(c.n):
        a = c.s.random_object(c.rng)
        g, r, s = c.s.scalar(c.rng), c.s.state(a, c.rng), c.s.effect(a, c.rng)
        lhs = prob(t, c.cat.tensor(g, r), s)
        rhs = lambda_scalar(t, g) * prob(t, r, s)
        tally.add(abs(lhs - rhs), scalar=g, state=r, effect=s)
    return tally.outcome()


@claim("scalar-equivalence", "gamma ~ gamma' <=> lambda(gamma) = lambda(gamma')",
       requires=_simplified_canonical)
def _c_scalar_equiv(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 2)):
        g1, g2 = _random_morphism_pair(c, i % 2 == 0, UNIT, UNIT)
        same_lambda = abs(lambda_scalar(c.t, g1) - lambda_scalar(c.t, g2)) <= c.cfg.tol
        probe = c.probe(g1, g2, n=20).equivalent
        tally.flag(same_lambda == probe, scalars=(g1, g2), same_lambda=same_lambda, probe=probe)
    return tally.outcome()


@claim("q-well-defined", "f ~ f', g ~ g' => g o f ~ g' o f' and f (x) g ~ f' (x) g'",
       requires=_simplified_canonical)
def _c_q_well_defined(c: Ctx):
    tally = Tally(10 * c.cfg.probe_tol)
    cat = c.cat
    for _ in range(max(10, c.n // 8)):
        a, b, d = c.obj(), c.obj(), c.obj()
        f, f2 = _random_morphism_pair(c, True, a, b)
        g, g2 = _random_morphism_pair(c, True, b, d)
        comp = c.probe(cat.compose(g, f), cat.compose(g2, f2), tol=10 * c.cfg.probe_tol, n=30)
        tens = c.probe(cat.tensor(f, g), cat.tensor(f2, g2), tol=10 * c.cfg.probe_tol, n=30)
        cc = qt.q_compose(qt.canonicalize(c.t, g), qt.canonicalize(c.t, f))
        cc2 = qt.q_compose(qt.canonicalize(c.t, g2), qt.canonicalize(c.t, f2))
        tally.add(max(comp.max_deviation, tens.max_deviation), f=f, g=g)
        tally.add(cc.distance(cc2), f=f, g=g, case="canonical composite")
    return tally.outcome()


@claim("q-probability", "rho ~ rho', sigma ~ sigma' => P(rho, sigma) = P(rho', sigma')",
       requires=_simplified_canonical)
def _c_q_probability(c: Ctx):
    tally = Tally(c.cfg.tol * 100)
    for _ in range(c.n):
        a = c.obj(allow_unit=False)
        r, r2 = _random_morphism_pair(c, True, UNIT, a)
        s, s2 = _random_morphism_pair(c, True, a, UNIT)
        p = qt.q_prob(qt.canonicalize(c.t, r), qt.canonicalize(c.t, s))
        p2 = qt.q_prob(qt.canonicalize(c.t, r2), qt.canonicalize(c.t, s2))
        tally.add(abs(p - p2), state=r, effect=s)
    return tally.outcome()


@claim("q-axioms", "axioms I-III hold on equivalence classes", requires=_simplified_canonical)
def _c_q_axioms(c: Ctx):
    t, cat, tally = c.t, c.cat, Tally(c.cfg.tol)
    Q = lambda m: qt.canonicalize(t, m)
    for _ in range(c.n // 2):
        a, b = c.s.random_object(c.rng, 4), c.s.random_object(c.rng, 4)
        r, f, s = Q(c.s.state(a, c.rng)), Q(c.s.process(a, b, c.rng)), Q(c.s.effect(b, c.rng))
        tally.add(abs(qt.q_prob(qt.q_compose(f, r), s) - qt.q_prob(r, qt.q_compose(s, f))), axiom="I")
        r2, s2 = Q(c.s.state(b, c.rng)), Q(c.s.effect(b, c.rng))
        s1 = Q(c.s.effect(a, c.rng))
        joint = qt.q_prob(qt.q_tensor(r, r2), qt.q_tensor(s1, s2))
        tally.add(abs(joint - qt.q_prob(r, s1) * qt.q_prob(r2, s2)), axiom="II")
    ps = [qt.q_prob(Q(r), Q(s)) for r, s in t.witnesses]
    tally.flag(any(p > c.cfg.tol for p in ps) and any(abs(p - 1) > c.cfg.tol for p in ps),
               axiom="III", witness_probabilities=ps)
    return tally.outcome()


@claim("fhilb-unit-rays", "|psi> ~ |phi> <=> psi psi^dag = phi phi^dag", requires=_kind("fhilb"))
def _c_unit_rays(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 2)):
        d = int(c.rng.choice((2, 3)))
        psi = la.random_state(d, c.rng)
        phases = np.linspace(0, 2 * np.pi, 10, endpoint=False) if i % 10 == 0 else ()
        for theta in phases:
            tally.flag(c.probe(psi, psi.scaled(np.exp(1j * theta)), n=20).equivalent,
                       state=psi, phase=theta)
        phi = la.random_state(d, c.rng) if i % 2 else psi.scaled(np.exp(2j * np.pi * c.rng.random()))
        dist = max_abs(np.outer(psi.mat, psi.mat.conj()) - np.outer(phi.mat, phi.mat.conj()))
        tally.flag(c.probe(psi, phi, n=40).equivalent == (dist < c.cfg.probe_tol),
                   states=(psi, phi), density_distance=dist)
    return tally.outcome()


@claim("fhilb-rank1-cp", "f ~ g <=> choi(f) = choi(g), a rank-1 CP map", requires=_kind("fhilb"))
def _c_rank1_cp(c: Ctx):
    tally = Tally(c.cfg.probe_tol)
    for _ in range(max(10, c.n // 2)):
        a, b = c.obj(), c.obj()
        f = c.process(a, b)
        C = la.choi(f)
        ks = la.kraus_from_choi(C, (a.dim, b.dim))
        ev = np.linalg.eigvalsh(C)
        rank1 = len(ks) == 1 and ev[0] >= -c.cfg.tol and (ev[:-1] <= 1e-9 * max(1, ev[-1])).all()
        tally.flag(rank1, morphism=f, kraus_count=len(ks))
        k = ks.items[0][0]
        tally.add(c.probe(f, k, n=30).max_deviation, morphism=f, kraus=k)
    return tally.outcome()


@claim("cp-fixed-point", "Q(CP) = CP: f ~ g <=> choi(f) = choi(g)", requires=_kind("cp"))
def _c_cp_fixed(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 2)):
        f, g = _random_morphism_pair(c, i % 2 == 0)
        same = max_abs(f.choi - g.choi) <= c.cfg.tol
        probe = c.probe(f, g, n=40).equivalent
        tally.flag(same == probe and max_abs(qt.canonicalize(c.t, f).canon - f.choi) == 0,
                   pair=(f, g), choi_equal=same, probe=probe)
    return tally.outcome()


@claim("q-born-inverse", "lambda_Q(theta_Q(p)) = p and theta_Q(lambda_Q(x)) = x",
       requires=_simplified_canonical)
def _c_q_born_inverse(c: Ctx):
    tally = Tally(c.cfg.tol)
    for _ in range(c.n):
        p = float(c.rng.uniform(0, 3))
        tally.add(abs(qt.lambda_Q(qt.theta_Q(c.t, p)) - p), p=p)
        x = qt.canonicalize(c.t, c.s.scalar(c.rng))
        tally.add(x.distance(qt.theta_Q(c.t, qt.lambda_Q(x))), scalar=x.rep)
    return tally.outcome()


# -- dilation-triple (G) claims ----------------------------------------------

@claim("g-construction", "(U, rho, sigma) triples are closed under o and (x)", requires=_canonical)
def _c_g_construction(c: Ctx):
    tally = Tally(0.0)
    for _ in range(max(10, c.n // 4)):
        a, b, d = c.obj(), c.obj(), c.obj()
        x, y = c.triple(a, b), c.triple(b, d)
        try:
            comp, tens = qt.g_compose(y, x), qt.g_tensor(x, y)
            ok = c.t.process_member(comp.U) and c.t.process_member(tens.U)
        except BornforgeError as exc:
            ok = False
            tally.flag(False, error=repr(exc))
            continue
        tally.flag(ok, triples=(x, y))
    return tally.outcome()


@claim("g-consistency", "G composition, tensor and P_G respect equivalence", requires=_canonical)
def _c_g_consistency(c: Ctx):
    tol = 10 * c.cfg.probe_tol
    tally = Tally(tol)
    for _ in range(max(8, c.n // 10)):
        a, b, d = c.obj(), c.obj(), c.obj()
        x, y = c.triple(a, b), c.triple(b, d)
        x2, y2 = c.variant(x), c.variant(y)
        tally.add(c.probe(qt.g_compose(y, x), qt.g_compose(y2, x2), tol=tol, n=30).max_deviation,
                  case="compose", triples=(x, y))
        tally.add(c.probe(qt.g_tensor(x, y), qt.g_tensor(x2, y2), tol=tol, n=30).max_deviation,
                  case="tensor", triples=(x, y))
        lhs = qt.g_collapse(qt.g_compose(y, x))
        rhs = c.cat.compose(qt.g_collapse(y), qt.g_collapse(x))
        tally.add(max_abs(lhs.mat - rhs.mat), case="collapse functor")
        e = c.obj(allow_unit=False)
        s, ef = c.triple(UNIT, e), c.triple(e, UNIT)
        s2, ef2 = c.variant(s), c.variant(ef)
        tally.add(abs(qt.g_prob(s, ef) - qt.g_prob(s2, ef2)), case="probability")
    return tally.outcome()


@claim("g-smc-laws", "G satisfies associativity, unit, interchange and symmetry laws",
       requires=_canonical)
def _c_g_smc(c: Ctx):
    t, tol = c.t, 10 * c.cfg.probe_tol
    tally = Tally(tol)
    P = lambda f, g, **kw: tally.add(c.probe(f, g, tol=tol, n=30).max_deviation, **kw)
    for _ in range(max(6, c.n // 20)):
        q = as_object(2)
        x, y, z = c.triple(q, q), c.triple(q, q), c.triple(q, q)
        P(qt.g_compose(qt.g_compose(z, y), x), qt.g_compose(z, qt.g_compose(y, x)), law="assoc")
        P(qt.g_compose(qt.g_identity(t, q), x), x, law="left unit")
        P(qt.g_compose(x, qt.g_identity(t, q)), x, law="right unit")
        w = c.triple(q, q)
        P(qt.g_compose(qt.g_tensor(x, y), qt.g_tensor(z, w)),
          qt.g_tensor(qt.g_compose(x, z), qt.g_compose(y, w)), law="interchange")
        sw = qt.g_swap(t, q, q)
        P(qt.g_compose(sw, sw), qt.g_identity(t, q @ q), law="swap involution")
        P(qt.g_compose(sw, qt.g_tensor(x, y)), qt.g_compose(qt.g_tensor(y, x), sw), law="swap natural")
        P(qt.g_tensor(qt.g_identity(t, UNIT), x), x, law="tensor unit")
    return tally.outcome()


@claim("q-g-isomorphism", "F(G(f)) ~ f and G(F(x)) ~ x", requires=_simplified_canonical)
def _c_q_g_iso(c: Ctx):
    tally = Tally(c.cfg.probe_tol)
    for _ in range(max(10, c.n // 4)):
        a, b = c.obj(), c.obj()
        f = c.process(a, b)
        back = qt.g_collapse(qt.g_embed(c.t, f))
        tally.add(qt.canonicalize(c.t, back).distance(qt.canonicalize(c.t, f)), case="F(G(f))")
        x = c.triple(a, b)
        y = qt.g_embed(c.t, qt.g_collapse(x))
        tally.add(qt.canonicalize(c.t, x).distance(qt.canonicalize(c.t, y)), case="G(F(x)) canonical")
        tally.add(c.probe(x, y, n=30).max_deviation, case="G(F(x)) probe", triple=x)
    return tally.outcome()


def _textbook(t):
    return _kind("textbook")(t)


@claim("textbook-kraus", "G(textbook) classes <-> Kraus operators, with P_G = Tr[rho sigma]",
       requires=_textbook)
def _c_textbook_kraus(c: Ctx):
    tally = Tally(c.cfg.probe_tol)
    for _ in range(max(10, c.n // 2)):
        a = c.obj(allow_unit=False)
        b = c.obj()
        f = la.random_contraction(a, b, c.rng)
        x = qt.stinespring_dilate(f, c.t)
        tally.add(max_abs(qt.g_collapse(x).mat - f.mat), case="collapse(dilate(f))", kraus=f)
        tally.add(qt.canonicalize(c.t, x).distance(qt.canonicalize(c.t, f)), case="class")
        psi = la.random_contraction(UNIT, a, c.rng)
        eff = la.random_contraction(a, UNIT, c.rng)
        p = qt.g_prob(qt.stinespring_dilate(psi, c.t), qt.stinespring_dilate(eff, c.t))
        rho = np.outer(psi.mat[:, 0], psi.mat[:, 0].conj())
        sigma = eff.mat.conj().T @ eff.mat
        tr = float(np.trace(rho @ sigma).real)
        tally.add(abs(p - tr), case="trace rule", state=psi, effect=eff, g_prob=p, trace=tr)
    return tally.outcome()


@claim("stinespring", "(1 (x) <0|) U (1 (x) |0>) = f with U unitary, for every contraction f",
       requires=_textbook)
def _c_stinespring(c: Ctx):
    tally = Tally(c.cfg.probe_tol)
    for _ in range(c.n // 2):
        a, b = c.obj(), c.obj()
        f = la.random_contraction(a, b, c.rng)
        x = qt.stinespring_dilate(f, c.t)
        u = x.U.mat
        tally.add(max_abs(qt.g_collapse(x).mat - f.mat), case="round trip", kraus=f)
        tally.add(max_abs(u.conj().T @ u - np.eye(u.shape[0])), case="unitarity", kraus=f)
    return tally.outcome()


@claim("g-stability", "ancilla-free probes separate distinct G classes", requires=_textbook)
def _c_g_stability(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 4)):
        a, b = c.obj(), c.obj()
        f = la.random_contraction(a, b, c.rng)
        g = la.random_contraction(a, b, c.rng)
        x, y = qt.stinespring_dilate(f, c.t), qt.stinespring_dilate(g, c.t)
        if i % 2 == 0:
            y = qt.equivalent_variant(x, c.rng)
        distinct = not (qt.canonicalize(c.t, x) == qt.canonicalize(c.t, y))
        refuted = not c.probe(x, y, dims=(1,), n=min(200, c.n)).equivalent
        tally.flag(distinct == refuted, kraus=(f, g), canonical_distinct=distinct, refuted=refuted)
    return tally.outcome("probes restricted to ancilla dimension 1")


@claim("g-born-rule", "P_G(s, e) = lambda_G(e o s) with lambda_G an injective homomorphism",
       requires=_canonical)
def _c_g_born(c: Ctx):
    tally = Tally(c.cfg.tol)
    t = c.t
    for _ in range(max(10, c.n // 4)):
        a = c.obj(allow_unit=False)
        s, e = c.triple(UNIT, a), c.triple(a, UNIT)
        tally.add(abs(qt.g_prob(s, e) - qt.lambda_G(qt.g_compose(e, s))), case="factor")
        x, y = c.triple(UNIT, UNIT), c.triple(UNIT, UNIT)
        tally.add(abs(qt.lambda_G(qt.g_tensor(x, y)) - qt.lambda_G(x) * qt.lambda_G(y)),
                  case="homomorphism")
        same_lam = abs(qt.lambda_G(x) - qt.lambda_G(y)) <= c.cfg.tol
        same_cls = qt.canonicalize(t, x) == qt.canonicalize(t, y)
        tally.add(0.0 if same_lam == same_cls else math.inf, case="injective")
        x2 = c.variant(x)
        tally.add(abs(qt.lambda_G(x) - qt.lambda_G(x2)), case="class function")
    tally.add(abs(qt.lambda_G(qt.g_identity(t, UNIT)) - 1.0), case="unit")
    return tally.outcome()


# -- summed (S) claims -------------------------------------------------------

def _ws(c: Ctx, dom, cod, allow_empty=False, max_items=2):
    return nz.random_weighted_set(c.t, dom, cod, c.rng, max_items, allow_empty)


@claim("s-smc-laws", "weighted-set o and (x) are associative, unital and symmetric",
       requires=_simplified)
def _c_s_smc(c: Ctx):
    tally = Tally(1e-12)
    t, cat = c.t, c.cat
    for _ in range(c.n // 4):
        a, b, d, e = c.obj(), c.obj(), c.obj(), c.obj()
        f, g, h = _ws(c, a, b), _ws(c, b, d), _ws(c, d, e)
        tally.add(nz.same_items(nz.ws_compose(nz.ws_compose(h, g), f),
                                nz.ws_compose(h, nz.ws_compose(g, f))), law="assoc")
        tally.add(nz.same_items(nz.ws_compose(nz.ws_identity(t, b), f), f), law="left unit")
        tally.add(nz.same_items(nz.ws_compose(f, nz.ws_identity(t, a)), f), law="right unit")
        tally.add(nz.same_items(nz.ws_tensor(nz.ws_tensor(f, g), h),
                                nz.ws_tensor(f, nz.ws_tensor(g, h))), law="tensor assoc")
        sw_in = WeightedSet.single(cat.permute([b, a], [1, 0]))
        sw_out = WeightedSet.single(cat.permute([b, d], [1, 0]))
        lhs = nz.ws_compose(sw_out, nz.ws_compose(nz.ws_tensor(f, g), sw_in))
        tally.add(nz.same_items(lhs, nz.ws_tensor(g, f)), law="symmetry")
    return tally.outcome()


@claim("s-interchange", "(g1 (x) g2) o (f1 (x) f2) = (g1 o f1) (x) (g2 o f2)", requires=_simplified)
def _c_s_interchange(c: Ctx):
    tally = Tally(1e-12)
    for _ in range(c.n // 2):
        a1, b1, c1, a2, b2, c2 = (c.obj() for _ in range(6))
        f1, g1 = _ws(c, a1, b1), _ws(c, b1, c1)
        f2, g2 = _ws(c, a2, b2), _ws(c, b2, c2)
        lhs = nz.ws_compose(nz.ws_tensor(g1, g2), nz.ws_tensor(f1, f2))
        rhs = nz.ws_tensor(nz.ws_compose(g1, f1), nz.ws_compose(g2, f2))
        tally.add(nz.same_items(lhs, rhs), sizes=(len(f1), len(g1), len(f2), len(g2)))
    return tally.outcome()


@claim("s-zero", "P_S(rho, 0) = 0 and 0 absorbs o and (x)", requires=_simplified)
def _c_s_zero(c: Ctx):
    tally = Tally(0.0)
    for _ in range(c.n // 4):
        a, b = c.obj(allow_unit=False), c.obj()
        r, s, f = _ws(c, UNIT, a), _ws(c, a, UNIT), _ws(c, a, b)
        tally.add(nz.prob_S(r, WeightedSet.zero(a, UNIT), c.t), case="zero effect")
        tally.add(nz.prob_S(WeightedSet.zero(UNIT, a), s, c.t), case="zero state")
        z_in, z_out = WeightedSet.zero(b, a), WeightedSet.zero(b, b)
        absorbed = (nz.ws_compose(f, z_in).is_zero and nz.ws_compose(z_out, f).is_zero
                    and nz.ws_tensor(f, z_in).is_zero and nz.ws_tensor(z_in, f).is_zero)
        tally.flag(absorbed, case="absorption")
    return tally.outcome()


@claim("s-axioms", "axioms I-III hold for P_S", requires=_simplified)
def _c_s_axioms(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol * 10)
    for _ in range(c.n // 2):
        a, b = c.s.random_object(c.rng, 4), c.s.random_object(c.rng, 4)
        r, f, s = _ws(c, UNIT, a), _ws(c, a, b), _ws(c, b, UNIT)
        lhs = nz.prob_S(nz.ws_compose(f, r), s, t)
        rhs = nz.prob_S(r, nz.ws_compose(s, f), t)
        tally.add(abs(lhs - rhs) / max(1.0, abs(lhs)), axiom="I")
        r2, s1, s2 = _ws(c, UNIT, b), _ws(c, a, UNIT), s
        joint = nz.prob_S(nz.ws_tensor(r, r2), nz.ws_tensor(s1, s2), t)
        prod = nz.prob_S(r, s1, t) * nz.prob_S(r2, s2, t)
        tally.add(abs(joint - prod) / max(1.0, abs(joint)), axiom="II")
    ps = [nz.prob_S(nz.ws_embed(t, r), nz.ws_embed(t, s), t) for r, s in t.witnesses]
    tally.flag(any(p > c.cfg.tol for p in ps) and any(abs(p - 1) > c.cfg.tol for p in ps),
               axiom="III", witness_probabilities=ps)
    return tally.outcome("relative deviation for I and II")


def _semiring_outcome(rep: nz.SemiringReport, laws) -> Outcome:
    chosen = [r for r in rep.laws if r.law in laws]
    failed = [r for r in chosen if not r.passed]
    return Outcome(not failed, max(r.worst_deviation for r in chosen), max(r.samples for r in chosen),
                   {r.law: r.counterexample for r in failed} or None, rep.note)


SEMIRING_LAWS = ("union_commutative", "union_associative", "union_unit", "tensor_associative",
                 "tensor_commutative", "tensor_unit", "distributive_left", "distributive_right",
                 "zero_annihilates")
LAMBDA_LAWS = ("lambda_additive", "lambda_multiplicative", "lambda_zero", "lambda_unit")


@claim("s-semiring", "scalar weighted sets form a commutative semiring", requires=_simplified)
def _c_s_semiring(c: Ctx):
    return _semiring_outcome(nz.semiring_check(c.t, c.n // 2, c.rng, c.cfg.tol), SEMIRING_LAWS)


@claim("s-lambda-homomorphism",
       "lambda_S(a u b) = lambda_S(a) + lambda_S(b), lambda_S(a (x) b) = lambda_S(a) lambda_S(b)",
       requires=_simplified)
def _c_s_lambda(c: Ctx):
    return _semiring_outcome(nz.semiring_check(c.t, c.n // 2, c.rng, c.cfg.tol), LAMBDA_LAWS)


def _mixtures(t: TheorySpec):
    h = 1 / math.sqrt(2)
    emb = t.category.embed
    q = as_object(2)
    comp = WeightedSet(UNIT, q, ((emb(la.state([1, 0])), 0.5), (emb(la.state([0, 1])), 0.5)))
    had = WeightedSet(UNIT, q, ((emb(la.state([h, h])), 0.5), (emb(la.state([h, -h])), 0.5)))
    return comp, had


@claim("s-kraus-redundancy", "{(|0>,1/2),(|1>,1/2)} ~ {(|+>,1/2),(|->,1/2)}", requires=_noisy)
def _c_kraus_redundancy(c: Ctx):
    t = c.t
    comp, had = _mixtures(t)
    tally = Tally(c.cfg.probe_tol)
    tally.add(nz.equiv_noisy(comp, had, t).max_deviation, mode="canonical")
    tally.add(nz.equiv_noisy(comp, had, t, "probe", c.n // 2, c.rng).max_deviation, mode="probe")
    for _ in range(c.n // 10):
        a, b = c.obj(), c.obj()
        ws = _ws(c, a, b, max_items=3)
        tally.add(nz.equiv_noisy(ws, nz.noisy_variant(ws, t, c.rng), t).max_deviation,
                  case="random Kraus mixing")
    return tally.outcome()


# -- noisy (N) claims --------------------------------------------------------

@claim("n-rank1-characterisation", "singleton probes decide noisy equivalence", requires=_noisy)
def _c_rank1_char(c: Ctx):
    tally = Tally(0.0)
    for i in range(max(10, c.n // 4)):
        a, b = c.obj(), c.obj()
        x = _ws(c, a, b, max_items=3)
        y = nz.noisy_variant(x, c.t, c.rng) if i % 2 == 0 else _ws(c, a, b, max_items=3)
        canon = nz.equiv_noisy(x, y, c.t).equivalent
        probe = nz.equiv_noisy(x, y, c.t, "probe", 40, c.rng, c.cfg.dims, c.cfg.probe_tol).equivalent
        tally.flag(canon == probe, sets=(x, y), canonical=canon, probe=probe)
    return tally.outcome()


def _density(m) -> np.ndarray:
    return m.choi if isinstance(m, CPMap) else np.outer(m.mat[:, 0], m.mat[:, 0].conj())


@claim("n-density-states", "noisy states <-> sum_i w_i |psi_i><psi_i| >= 0", requires=_noisy)
def _c_density_states(c: Ctx):
    tally = Tally(c.cfg.tol)
    for _ in range(c.n // 2):
        a = c.obj(allow_unit=False)
        ws = _ws(c, UNIT, a, max_items=4)
        canon = nz.noisy_canonical(ws, c.t).canon
        direct = sum(w * _density(m) for m, w in ws.items)
        tally.add(max_abs(canon - direct), case="density sum")
        tally.add(max(0.0, -float(np.linalg.eigvalsh(canon)[0])), case="positivity")
        rho = la.random_density(a.dim, c.rng) * c.rng.uniform(0.1, 2)
        back = la.kraus_from_choi(rho, (1, a.dim))
        back = WeightedSet(UNIT, a, tuple((c.cat.embed(m), w) for m, w in back.items))
        tally.add(max_abs(nz.noisy_canonical(back, c.t).canon - rho), case="surjective")
    return tally.outcome()


@claim("n-choi-morphisms", "noisy morphisms <-> positive Choi matrices", requires=_noisy)
def _c_choi_morphisms(c: Ctx):
    tally = Tally(c.cfg.tol)
    for _ in range(c.n // 2):
        a, b = c.obj(allow_unit=False), c.obj(allow_unit=False)
        ws = _ws(c, a, b, max_items=3)
        canon = nz.noisy_canonical(ws, c.t).canon
        tally.add(max(0.0, -float(np.linalg.eigvalsh(canon)[0])), case="positivity")
        C = la.random_psd(a.dim * b.dim, c.rng)
        back = la.kraus_from_choi(C, (a.dim, b.dim))
        back = WeightedSet(a, b, tuple((c.cat.embed(m), w) for m, w in back.items))
        tally.add(max_abs(nz.noisy_canonical(back, c.t).canon - C), case="surjective")
    return tally.outcome()


@claim("n-trace-born", "P_N(rho, sigma) = Tr[rho sigma] for the summed density/effect matrices",
       requires=_noisy)
def _c_trace_born(c: Ctx):
    tally = Tally(c.cfg.tol)
    for _ in range(c.n):
        a = c.obj(allow_unit=False)
        r, s = _ws(c, UNIT, a, max_items=3), _ws(c, a, UNIT, max_items=3)
        rho = nz.noisy_canonical(r, c.t).canon
        eff = nz.noisy_canonical(s, c.t).canon.T
        p, tr = nz.prob_S(r, s, c.t), float(np.trace(rho @ eff).real)
        tally.add(abs(p - tr) / max(1.0, abs(tr)), p=p, trace=tr)
    return tally.outcome()


@claim("n-additive-union", "canon(a u b) = canon(a) + canon(b) and u respects classes",
       requires=_noisy)
def _c_additive_union(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol)
    for _ in range(c.n // 2):
        a, b = c.obj(), c.obj()
        x, y = _ws(c, a, b, allow_empty=True), _ws(c, a, b, allow_empty=True)
        cx, cy = nz.noisy_canonical(x, t), nz.noisy_canonical(y, t)
        cu = nz.noisy_canonical(nz.ws_union(x, y), t)
        tally.add(max_abs(cu.canon - cx.canon - cy.canon), case="additive")
        x2 = nz.noisy_variant(x, t, c.rng)
        tally.add(cu.distance(nz.noisy_canonical(nz.ws_union(x2, y), t)), case="class respecting")
    return tally.outcome()


@claim("n-semiring-isomorphism", "lambda_N and theta_N are inverse semiring maps", requires=_noisy)
def _c_semiring_iso(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol)
    for _ in range(c.n // 2):
        x = nz.noisy_canonical(_ws(c, UNIT, UNIT, allow_empty=True, max_items=3), t)
        y = nz.noisy_canonical(_ws(c, UNIT, UNIT, allow_empty=True, max_items=3), t)
        tally.add(x.distance(nz.theta_N(nz.lambda_N(x), t)), case="theta(lambda(x))")
        p = float(c.rng.uniform(0, 3))
        tally.add(abs(nz.lambda_N(nz.theta_N(p, t)) - p), case="lambda(theta(p))")
        u = nz.noisy_canonical(nz.ws_union(x.rep, y.rep), t)
        m = nz.noisy_canonical(nz.ws_tensor(x.rep, y.rep), t)
        tally.add(abs(nz.lambda_N(u) - nz.lambda_N(x) - nz.lambda_N(y)), case="additive")
        tally.add(abs(nz.lambda_N(m) - nz.lambda_N(x) * nz.lambda_N(y)), case="multiplicative")
        tally.add(0.0 if (abs(nz.lambda_N(x) - nz.lambda_N(y)) <= c.cfg.tol) == (x == y) else math.inf,
                  case="injective")
    return tally.outcome()


@claim("n-rigidity", "lambda_N(x) = x on the nonnegative reals", requires=_fhilb2)
def _c_rigidity(c: Ctx):
    rep = nz.rigidity_check(50, c.rng, c.cfg.tol, c.t)
    bad = [p for p in rep.points if p["deviation"] > c.cfg.tol or not p["theta_round_trip"]]
    wit = None if rep.passed else {"points": bad, "naturals_ok": rep.naturals_ok,
                                   "order_ok": rep.order_ok}
    return Outcome(rep.passed, rep.worst_deviation, len(rep.points) + 20, wit)


@claim("cp-born-corollary", "P_CP(rho, e) = Tr[rho e]", requires=_kind("cp"))
def _c_cp_born(c: Ctx):
    t, tally = c.t, Tally(c.cfg.tol)
    for _ in range(c.n):
        a = c.s.random_object(c.rng)
        r, e = c.s.state(a, c.rng), c.s.effect(a, c.rng)
        tr = float(np.trace(r.density @ e.effect_operator).real)
        tally.add(abs(prob(t, r, e) - tr), state=r, effect=e)
        g = c.s.scalar(c.rng)
        tally.add(abs(lambda_scalar(t, g) - g.value.real), scalar=g)
    return tally.outcome()


# -- running -----------------------------------------------------------------

def _run_claim(entry: Claim, t: TheorySpec, cfg: SuiteConfig) -> ClaimCheck:
    reason = entry.requires(t)
    if reason:
        return ClaimCheck(entry.claim_id, entry.anchor, SKIPPED, None, 0, None, cfg.seed, reason)
    ctx = Ctx(t, claim_rng(cfg.seed, entry.claim_id), cfg)
    try:
        out = entry.runner(ctx)
    except Skip as exc:
        return ClaimCheck(entry.claim_id, entry.anchor, SKIPPED, None, 0, None, cfg.seed, str(exc))
    except Exception as exc:  # a crash is a failed verdict with evidence
        return ClaimCheck(entry.claim_id, entry.anchor, FAIL, None, 0,
                          {"error": f"{type(exc).__name__}: {exc}"}, cfg.seed)
    return ClaimCheck(entry.claim_id, entry.anchor, PASS if out.passed else FAIL,
                      out.max_deviation, out.samples, out.witness, cfg.seed, out.note)


def run_suite(t: TheorySpec, config: SuiteConfig = None, only=None) -> list:
    """Run every registered claim (or those in ``only``) against theory t."""
    cfg = config or SuiteConfig()
    entries = [e for e in REGISTRY if only is None or e.claim_id in only]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(lambda e: _run_claim(e, t, cfg), entries))
    return [_run_claim(e, t, cfg) for e in entries]


def claim_ids() -> list:
    return [e.claim_id for e in REGISTRY]


def registry_audit() -> dict:
    """Every topic maps to exactly one claim id and vice versa."""
    ids = claim_ids()
    return {"claims": len(ids), "topics": len(IN_SCOPE_TOPICS),
            "unclaimed": sorted(set(IN_SCOPE_TOPICS.values()) - set(ids)),
            "untracked": sorted(set(ids) - set(IN_SCOPE_TOPICS.values())),
            "duplicates": sorted({i for i in ids if ids.count(i) > 1})}


IN_SCOPE_TOPICS = {
    "associativity axiom": "axiom-I",
    "product axiom": "axiom-II",
    "non-triviality axiom": "axiom-III",
    "simplified theories": "unit-physical",
    "unit probability": "unit-probability",
    "discard effects": "discard",
    "lambda function": "lambda-existence",
    "monoid homomorphism": "lambda-homomorphism",
    "power-rule family": "power-rule",
    "probabilistic equivalence": "probe-canonical-agreement",
    "state equivalence": "state-equivalence",
    "scalar factor-through": "scalar-factor-through",
    "scalar equivalence": "scalar-equivalence",
    "quotient composition": "q-well-defined",
    "quotient probabilities": "q-probability",
    "quotient axioms": "q-axioms",
    "unit rays": "fhilb-unit-rays",
    "rank-1 CP maps": "fhilb-rank1-cp",
    "CP fixed point": "cp-fixed-point",
    "Born rule for simplified theories": "q-born-inverse",
    "dilation triples": "g-construction",
    "triple consistency": "g-consistency",
    "triple category is symmetric monoidal": "g-smc-laws",
    "quotient and triple categories agree": "q-g-isomorphism",
    "textbook theory and Kraus maps": "textbook-kraus",
    "unitary dilation": "stinespring",
    "stability under quotienting": "g-stability",
    "Born rule corollary for triples": "g-born-rule",
    "summed category": "s-smc-laws",
    "summed interchange": "s-interchange",
    "zero morphism": "s-zero",
    "summed axioms": "s-axioms",
    "scalar semiring": "s-semiring",
    "semiring homomorphism": "s-lambda-homomorphism",
    "Kraus redundancy": "s-kraus-redundancy",
    "rank-1 characterisation": "n-rank1-characterisation",
    "density-matrix states": "n-density-states",
    "CP morphisms": "n-choi-morphisms",
    "trace Born rule": "n-trace-born",
    "additive union": "n-additive-union",
    "semiring isomorphism": "n-semiring-isomorphism",
    "rigidity": "n-rigidity",
    "CP Born corollary": "cp-born-corollary",
}


# -- planted faults ----------------------------------------------------------

@dataclass
class MutantResult:
    mutant: str
    expected: tuple
    detected: bool
    failing: list = field(default_factory=list)


@dataclass
class MutationReport:
    results: list

    @property
    def all_detected(self) -> bool:
        return all(r.detected for r in self.results)

    def __bool__(self):
        return self.all_detected


def _mutant_theories(base: TheorySpec) -> list:
    def shifted(r, s):
        return raw_prob(base, r, s) + 0.1

    def phase_sensitive(r, s):
        z = base.category.compose(s, r).value
        return max(0.0, (z * z).real)

    return [
        ("additive-noise P+0.1", base.with_rule(Custom(shifted, "P+0.1")), ("axiom-II",)),
        ("constant P=1", base.with_rule(Custom(lambda r, s: 1.0, "P=1")), ("axiom-III",)),
        ("phase-sensitive max(0, Re z^2)", base.with_rule(Custom(phase_sensitive, "Re z^2")),
         ("axiom-I", "axiom-II", "lambda-homomorphism")),
    ]


def mutation_tests(config: SuiteConfig = None, strict: bool = True,
                   base: TheorySpec = None) -> MutationReport:
    """Run the relevant claims against planted faults; each must be caught."""
    cfg = config or SuiteConfig()
    base = base or builtin("fhilb", k=2)
    results = []
    for name, theory, expected in _mutant_theories(base):
        checks = run_suite(theory, cfg, only=set(expected))
        failing = [ch.claim_id for ch in checks if ch.verdict == FAIL]
        results.append(MutantResult(name, expected, bool(failing), failing))
    rep = nz.semiring_check(base, cfg.n_samples // 2, claim_rng(cfg.seed, "mutant-lambda-squared"),
                            cfg.tol, lambda_fn=lambda g: nz.lambda_S(g, base) ** 2)
    failing = [r.law for r in rep.laws if not r.passed]
    results.append(MutantResult("summed lambda squared", ("lambda_additive",),
                                "lambda_additive" in failing, failing))
    report = MutationReport(results)
    if strict and not report.all_detected:
        missed = [r.mutant for r in results if not r.detected]
        raise UndetectedMutant(f"planted faults not detected: {missed}")
    return report
