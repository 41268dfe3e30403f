"""Theory-definition files and weighted-set files.

Theory files are line oriented::

    # comments run to end of line
    theory qubit_demo
    rule born k=2            # or: rule trace | rule stochastic
    simplified               # optional; "simplified false" also accepted
    object q = 2
    gen ket0 : I -> q = [[1], [0]]
    gen bra1 : q -> I = [[0, 1]]
    gen had : q -> q = [[0.7071067811865476, 0.7071067811865476],
                        [0.7071067811865476, -0.7071067811865476]]
    role ket0 state

Complex literals are ``float (("+"|"-") float "i")?``.  A matrix literal may
span lines while its brackets are open.  Object expressions are ``I`` or
names joined by ``*``.  Generators without a role take one from their shape.

Weighted-set files hold one ``weight | matrix`` record per line; an optional
``shape R x C`` line fixes the shape of an empty set.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg as la
from .categories import CHOI, MATRIX, relabel
from .errors import NotMember, ParseError, SamplerUnavailable, ShapeError, UnknownObject
from .linalg import UNIT, Morphism, TheoryObject, WeightedSet, as_object
from .theory import (
    MEMBER_TOL, BornPower, Sampler, StochasticInner, TheorySpec, TraceRule, _always, _is_cp, _is_unitary,
    _stoch_effect, _stoch_process, _stoch_state, _unit_norm, raw_prob,
)

ROLES = ("process", "state", "effect")
RULES = ("born", "trace", "stochastic")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_FLOAT = re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_WS = re.compile(r"[ \t\r\n]*")


@dataclass(frozen=True)
class Generator:
    name: str
    dom: tuple
    cod: tuple
    matrix: tuple


@dataclass(frozen=True)
class TheoryFile:
    name: str
    rule: str
    k: Optional[float]
    simplified: bool
    objects: tuple
    generators: tuple
    roles: tuple

    @property
    def object_dims(self) -> dict:
        return dict(self.objects)

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise UnknownObject(f"unknown generator {name!r}")

    def roles_of(self, name: str) -> tuple:
        for n, tags in self.roles:
            if n == name:
                return tags
        g = self.generator(name)
        if not g.dom and not g.cod:
            return ("scalar",)
        if not g.dom:
            return ("state",)
        if not g.cod:
            return ("effect",)
        return ("process",)


# -- low-level scanning ------------------------------------------------------

class _Cursor:
    """Scanner over a (possibly multi-line) statement with original locations."""

    def __init__(self, text: str, line: int, col: int):
        self.text, self.pos = text, 0
        self.line0, self.col0 = line, col

    def where(self, pos: int = None) -> tuple:
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        nl = before.count("\n")
        if nl == 0:
            return self.line0, self.col0 + pos
        return self.line0 + nl, pos - before.rfind("\n")

    def fail(self, msg: str, pos: int = None, cls=ParseError):
        line, col = self.where(pos)
        raise cls(msg, line, col)

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos:self.pos + 1]

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            got = self.text[self.pos:self.pos + 1] or "end of line"
            self.fail(f"expected {s!r}, found {got!r}")
        self.pos += len(s)

    def ident(self, what: str) -> str:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def float_(self, signed: bool = True) -> float:
        self.skip()
        start = self.pos
        sign = 1.0
        c = self.text[self.pos:self.pos + 1]
        if signed and c and c in "+-":
            sign = -1.0 if c == "-" else 1.0
            self.pos += 1
        m = _FLOAT.match(self.text, self.pos)
        if not m:
            self.fail("expected a number", self.pos if self.pos > start else start)
        self.pos = m.end()
        return sign * float(m.group())

    def complex_(self) -> complex:
        re_part = self.float_()
        c = self.text[self.pos:self.pos + 1]
        if c and c in "+-":
            self.pos += 1
            if not _FLOAT.match(self.text, self.pos):
                self.fail("malformed complex literal; write it as a+bi")
            im = self.float_(signed=False)
            if self.text[self.pos:self.pos + 1] != "i":
                self.fail("expected 'i' after the imaginary part")
            self.pos += 1
            return complex(re_part, -im if c == "-" else im)
        if c == "i":
            self.fail("pure imaginary literals are written 0+bi")
        return complex(re_part, 0.0)

    def matrix(self) -> tuple:
        self.expect("[")
        rows = []
        while True:
            self.expect("[")
            row = [self.complex_()]
            while self.peek() == ",":
                self.pos += 1
                row.append(self.complex_())
            self.expect("]")
            rows.append(tuple(row))
            if self.peek() == ",":
                self.pos += 1
                continue
            break
        self.expect("]")
        return tuple(rows)

    def end(self):
        self.skip()
        if self.pos < len(self.text):
            self.fail(f"unexpected {self.text[self.pos]!r}")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _statements(text: str):
    """Yield (text, line, col) per statement, joining lines while brackets are open."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = _strip_comment(lines[i])
        if not raw.strip():
            i += 1
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        start = i
        buf = raw.lstrip()
        depth = buf.count("[") - buf.count("]")
        while depth > 0 and i + 1 < len(lines):
            i += 1
            nxt = _strip_comment(lines[i])
            buf += "\n" + nxt
            depth += nxt.count("[") - nxt.count("]")
        yield buf.rstrip(), start + 1, col
        i += 1


# -- theory files ------------------------------------------------------------

def _check_shape(cur: _Cursor, mat: tuple, rows: int, cols: int, at: int):
    n = sum(len(r) for r in mat)
    if len(mat) != rows or any(len(r) != cols for r in mat):
        shape = f"{len(mat)} rows with lengths {[len(r) for r in mat]}"
        cur.fail(f"matrix has {shape} ({n} entries) but the declared shape is {rows}x{cols}",
                 at, ShapeError)


def parse_theory(text: str) -> TheoryFile:
    """Parse a theory file; raises ParseError (or a subclass) with line/col."""
    name = rule = None
    k = None
    simplified = False
    seen_simplified = False
    objects, gens, roles = {}, {}, {}
    last = (1, 1)
    for stmt, line, col in _statements(text):
        cur = _Cursor(stmt, line, col)
        last = (line, col)
        kw = cur.ident("a keyword")
        if name is None and kw != "theory":
            cur.fail("file must start with 'theory <name>'", 0)
        if kw == "theory":
            if name is not None:
                cur.fail("duplicate 'theory' header", 0)
            name = cur.ident("a theory name")
            cur.end()
        elif kw == "rule":
            if rule is not None:
                cur.fail("duplicate 'rule' statement", 0)
            cur.skip()
            at = cur.pos
            rule = cur.ident("a rule name")
            if rule not in RULES:
                cur.fail(f"unknown rule {rule!r}; expected one of {', '.join(RULES)}", at)
            if rule == "born":
                cur.expect("k")
                cur.expect("=")
                at = cur.pos
                k = cur.float_()
                if not k > 0:
                    cur.fail("k must be positive", at)
            cur.end()
        elif kw == "simplified":
            if seen_simplified:
                cur.fail("duplicate 'simplified' statement", 0)
            seen_simplified = True
            simplified = True
            if cur.peek():
                at = cur.pos
                val = cur.ident("true or false")
                if val not in ("true", "false"):
                    cur.fail("expected true or false", at)
                simplified = val == "true"
            cur.end()
        elif kw == "object":
            cur.skip()
            at = cur.pos
            oname = cur.ident("an object name")
            if oname == "I":
                cur.fail("'I' is reserved for the unit object", at)
            if oname in objects:
                cur.fail(f"duplicate object {oname!r}", at)
            cur.expect("=")
            cur.skip()
            at = cur.pos
            m = re.compile(r"\d+").match(cur.text, cur.pos)
            if not m or int(m.group()) < 1:
                cur.fail("object dimension must be a positive integer", at)
            cur.pos = m.end()
            objects[oname] = int(m.group())
            cur.end()
        elif kw == "gen":
            cur.skip()
            at = cur.pos
            gname = cur.ident("a generator name")
            if gname in gens:
                cur.fail(f"duplicate generator {gname!r}", at)
            cur.expect(":")
            dom = _object_expr(cur, objects)
            cur.expect("->")
            cod = _object_expr(cur, objects)
            cur.expect("=")
            cur.skip()
            at = cur.pos
            mat = cur.matrix()
            cur.end()
            dims = lambda names: math.prod(objects[n] for n in names)
            _check_shape(cur, mat, dims(cod), dims(dom), at)
            gens[gname] = Generator(gname, dom, cod, mat)
        elif kw == "role":
            cur.skip()
            at = cur.pos
            gname = cur.ident("a generator name")
            if gname not in gens:
                cur.fail(f"unknown generator {gname!r}", at, UnknownObject)
            if gname in roles:
                cur.fail(f"duplicate role for {gname!r}", at)
            tags = []
            while cur.peek():
                at_tag = cur.pos
                tag = cur.ident("a role")
                if tag not in ROLES:
                    cur.fail(f"unknown role {tag!r}; expected one of {', '.join(ROLES)}", at_tag)
                g = gens[gname]
                if tag == "state" and g.dom:
                    cur.fail(f"state {gname!r} must have domain I", at_tag, ShapeError)
                if tag == "effect" and g.cod:
                    cur.fail(f"effect {gname!r} must have codomain I", at_tag, ShapeError)
                if tag not in tags:
                    tags.append(tag)
            if not tags:
                cur.fail("expected at least one role")
            roles[gname] = tuple(tags)
        else:
            cur.fail(f"unknown statement {kw!r}", 0)
    if name is None:
        raise ParseError("empty theory file; expected 'theory <name>'", 1, 1)
    if rule is None:
        raise ParseError("missing 'rule' statement", *last)
    return TheoryFile(name, rule, k, simplified, tuple(objects.items()), tuple(gens.values()),
                      tuple(roles.items()))


def _object_expr(cur: _Cursor, objects: dict) -> tuple:
    cur.skip()
    at = cur.pos
    first = cur.ident("an object name or I")
    if first == "I":
        return ()
    names = [(first, at)]
    while cur.peek() == "*":
        cur.pos += 1
        cur.skip()
        names.append((cur.ident("an object name"), cur.pos))
    for n, pos in names:
        if n not in objects:
            cur.fail(f"unknown object {n!r}", pos if n == first else pos - len(n), UnknownObject)
    return tuple(n for n, _ in names)


def format_complex(z: complex) -> str:
    re_s = repr(float(z.real))
    if z.imag == 0 and math.copysign(1.0, z.imag) > 0:
        return re_s
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{re_s}{sign}{repr(abs(float(z.imag)))}i"


def format_matrix(mat) -> str:
    return "[" + ", ".join("[" + ", ".join(format_complex(z) for z in row) + "]" for row in mat) + "]"


def serialize(tf: TheoryFile) -> str:
    """Canonical text of a TheoryFile; parse(serialize(tf)) == tf."""
    out = [f"theory {tf.name}"]
    out.append(f"rule born k={tf.k!r}" if tf.rule == "born" else f"rule {tf.rule}")
    if tf.simplified:
        out.append("simplified")
    out += [f"object {n} = {d}" for n, d in tf.objects]
    obj = lambda names: " * ".join(names) if names else "I"
    for g in tf.generators:
        out.append(f"gen {g.name} : {obj(g.dom)} -> {obj(g.cod)} = {format_matrix(g.matrix)}")
    out += [f"role {n} {' '.join(tags)}" for n, tags in tf.roles]
    return "\n".join(out) + "\n"


def load_theory_file(path: str) -> TheoryFile:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())


# -- building a theory -------------------------------------------------------

class PoolSampler(Sampler):
    """Samples tensor products of declared generators, block by block.

    Objects are split into consecutive blocks matching generator objects;
    each block gets a random generator (and, half the time, a random
    endomorphism generator after it).  Dimension-1 factors take the unit.
    """

    measure = "uniform over declared generators per block; identity where no process fits"

    def __init__(self, category, states, effects, processes, scalars, max_wires=3, max_total=8,
                 rank_one: bool = False):
        super().__init__(max_dim=max_total, max_wires=max_wires, max_total=max_total)
        self.cat = category
        self.rank_one = rank_one
        self.causal = None
        self.states, self.effects = states, effects
        self.processes, self.scalars = processes, scalars
        self.blocks = sorted(set(states) & set(effects))
        dims = {math.prod(b) for b in self.blocks if len(b) == 1}
        self.small_dims = tuple(sorted(dims | {1}))
        self.atoms = sorted({d for key in list(states) + list(effects) for d in key if d > 1})

    def _split(self, d: int):
        """Write d as a product of generator dimensions, if possible."""
        if d == 1 or d in self.atoms:
            return [d]
        for a in self.atoms:
            if d % a == 0:
                rest = self._split(d // a)
                if rest is not None:
                    return [a] + rest
        return None

    def _expand(self, factors) -> tuple:
        out = []
        for d in factors:
            parts = self._split(d)
            out += parts if parts is not None else [d]
        return tuple(out)

    def random_object(self, rng, max_total=None):
        if not self.blocks:
            raise SamplerUnavailable("no object carries both a state and an effect generator")
        cap = self.max_total if max_total is None else max_total
        factors = []
        for _ in range(int(rng.integers(1, self.max_wires + 1))):
            room = [b for b in self.blocks if math.prod(factors) * math.prod(b) <= cap]
            if not room:
                break
            factors += list(room[int(rng.integers(len(room)))])
        if not factors:
            factors = list(min(self.blocks, key=math.prod))
        return TheoryObject(tuple(factors))

    def _segments(self, factors, table, rng):
        n = len(factors)
        ok = [False] * (n + 1)
        ok[n] = True
        for i in range(n - 1, -1, -1):
            ok[i] = (factors[i] == 1 and ok[i + 1]) or any(
                tuple(factors[i:i + len(key)]) == key and ok[i + len(key)] for key in table if key)
        if not ok[0]:
            return None
        segs, i = [], 0
        while i < n:
            opts = [key for key in table if key and tuple(factors[i:i + len(key)]) == key
                    and ok[i + len(key)]]
            if factors[i] == 1 and ok[i + 1]:
                opts.append((1,))
            key = opts[int(rng.integers(len(opts)))]
            segs.append(key)
            i += len(key)
        return segs

    def _endo(self, seg, rng):
        procs = self.processes.get((seg, seg), ())
        if procs and rng.random() < 0.5:
            return procs[int(rng.integers(len(procs)))]
        return None

    def _assemble(self, obj, table, rng, as_state: bool):
        obj = as_object(obj)
        if obj.dim == 1:
            one = self.cat.unit_state()
            return relabel(one, UNIT, obj) if as_state else relabel(one, obj, UNIT)
        segs = self._segments(obj.factors, table, rng)
        if segs is None:
            segs = self._segments(self._expand(obj.factors), table, rng)
        if segs is None:
            kind = "state" if as_state else "effect"
            raise SamplerUnavailable(f"no {kind} generators cover object {obj!r}")
        out = None
        for seg in segs:
            pool = table.get(seg, ())
            if seg == (1,) and not pool:
                piece = self.cat.unit_state()
            else:
                piece = pool[int(rng.integers(len(pool)))]
                f = self._endo(seg, rng)
                if f is not None:
                    piece = self.cat.compose(f, piece) if as_state else self.cat.compose(piece, f)
            out = piece if out is None else self.cat.tensor(out, piece)
        return relabel(out, UNIT, obj) if as_state else relabel(out, obj, UNIT)

    def state(self, obj, rng):
        return self._assemble(obj, self.states, rng, True)

    def effect(self, obj, rng):
        return self._assemble(obj, self.effects, rng, False)

    def process(self, dom, cod, rng):
        dom, cod = as_object(dom), as_object(cod)
        pieces = self._process_pieces(dom.factors, cod.factors, rng)
        if pieces is None:
            pieces = self._process_pieces(self._expand(dom.factors), self._expand(cod.factors), rng)
        if pieces is None and self.rank_one:
            # every morphism is physical, so |rho><sigma| style maps are allowed
            return relabel(self.cat.tensor(self.effect(dom, rng), self.state(cod, rng)), dom, cod)
        if pieces is None:
            if dom.dim != cod.dim:
                raise SamplerUnavailable(f"no process generators from {dom!r} to {cod!r}")
            return relabel(self.cat.identity(dom), dom, cod)
        out = self.cat.unit_state()
        for p in pieces:
            out = self.cat.tensor(out, p)
        return relabel(out, dom, cod)

    def _process_pieces(self, dom, cod, rng):
        """Random tiling of (dom, cod) by generators, identities and unit factors."""
        n, m = len(dom), len(cod)
        memo = {}

        def options(i, j):
            opts = []
            for (d, c), procs in self.processes.items():
                if d and c and tuple(dom[i:i + len(d)]) == d and tuple(cod[j:j + len(c)]) == c:
                    opts.append((len(d), len(c), procs))
            if i < n and j < m and dom[i] == cod[j]:
                opts.append((1, 1, None))
            if i < n and dom[i] == 1:
                opts.append((1, 0, None))
            if j < m and cod[j] == 1:
                opts.append((0, 1, None))
            return opts

        def ok(i, j):
            if (i, j) not in memo:
                memo[(i, j)] = (i == n and j == m) or any(
                    ok(i + a, j + b) for a, b, _ in options(i, j))
            return memo[(i, j)]

        if not ok(0, 0):
            return None
        i = j = 0
        pieces = []
        while (i, j) != (n, m):
            opts = [o for o in options(i, j) if ok(i + o[0], j + o[1])]
            a, b, procs = opts[int(rng.integers(len(opts)))]
            d, c = TheoryObject(tuple(dom[i:i + a])), TheoryObject(tuple(cod[j:j + b]))
            if procs is not None:
                pieces.append(procs[int(rng.integers(len(procs)))])
            else:
                pieces.append(relabel(self.cat.identity(as_object(max(d.dim, c.dim))), d, c))
            i, j = i + a, j + b
        return pieces

    def process_codomain(self, dom, rng):
        dom = as_object(dom)
        cods = [TheoryObject(c) for (d, c) in self.processes if d == dom.factors]
        cods.append(dom)
        return cods[int(rng.integers(len(cods)))]

    def scalar(self, rng):
        if self.scalars:
            return self.scalars[int(rng.integers(len(self.scalars)))]
        a = self.random_object(rng)
        return self.cat.compose(self.effect(a, rng), self.state(a, rng))

    def causal_state(self, obj, rng, tries: int = 64):
        if self.causal is None:
            raise SamplerUnavailable("theory declares no discard effects")
        for _ in range(tries):
            s = self.state(obj, rng)
            if self.causal(s):
                return s
        raise SamplerUnavailable(f"no causal state generated on {as_object(obj)!r}")

    def basis_state(self, obj, i):
        return self.cat.embed(super().basis_state(obj, i))

    def basis_effect(self, obj, j):
        return self.cat.embed(super().basis_effect(obj, j))


_MEMBERSHIP = {
    "born": (_is_unitary, _unit_norm, _unit_norm),
    "stochastic": (_stoch_process, _stoch_state, _stoch_effect),
    "trace": (_is_cp, _is_cp, _is_cp),
}


def generator_morphism(tf: TheoryFile, g: Generator) -> Morphism:
    dims = tf.object_dims
    obj = lambda names: TheoryObject(tuple(dims[n] for n in names))
    return Morphism(obj(g.dom), obj(g.cod), np.array(g.matrix, dtype=complex))


def to_theory(tf: TheoryFile, max_wires: int = 3, max_total: int = 8) -> TheorySpec:
    """Build a TheorySpec: generators feed the sampler, the rule fixes membership.

    Simplified files accept every morphism.  Otherwise physical processes,
    states and effects are those of the rule family (unitaries and unit
    vectors for born, stochastic maps for stochastic, CP maps for trace),
    and every declared generator must belong to its role's set.
    """
    cat = CHOI if tf.rule == "trace" else MATRIX
    rule = {"born": lambda: BornPower(tf.k), "trace": TraceRule,
            "stochastic": StochasticInner}[tf.rule]()
    preds = (_always,) * 3 if tf.simplified else _MEMBERSHIP[tf.rule]
    states, effects, processes, scalars = {}, {}, {}, []
    for g in tf.generators:
        m = cat.embed(generator_morphism(tf, g))
        for role in tf.roles_of(g.name):
            pred = {"process": preds[0], "state": preds[1], "effect": preds[2],
                    "scalar": preds[0]}[role]
            if not pred(m):
                raise NotMember(f"generator {g.name!r} is not a physical {role} for rule {tf.rule}")
            if role == "scalar":
                scalars.append(m)
            elif role == "state":
                states.setdefault(m.cod.factors, []).append(m)
            elif role == "effect":
                effects.setdefault(m.dom.factors, []).append(m)
            else:
                processes.setdefault((m.dom.factors, m.cod.factors), []).append(m)
    sampler = PoolSampler(cat, states, effects, processes, scalars, max_wires, max_total,
                          rank_one=tf.simplified)
    witnesses = tuple((s, e) for b in sampler.blocks for s in states[b] for e in effects[b])[:16]
    discard = None
    if tf.rule == "stochastic":
        discard = lambda a: la.effect(np.ones(as_object(a).dim), a)
    elif tf.rule == "trace":
        from .categories import CPMap
        discard = lambda a: CPMap(as_object(a), UNIT, np.eye(as_object(a).dim))
    params = {"k": tf.k} if tf.rule == "born" else {}
    t = TheorySpec(tf.name, cat, rule, tf.simplified, process_member=preds[0],
                   state_member=preds[1], effect_member=preds[2], sampler=sampler,
                   witnesses=witnesses, discard=discard, kind="file", params=params)
    if discard is not None:
        sampler.causal = lambda s: abs(raw_prob(t, s, discard(s.cod)) - 1.0) <= MEMBER_TOL
    return t


def load_theory(path: str, **kw) -> TheorySpec:
    return to_theory(load_theory_file(path), **kw)


# -- weighted-set files ------------------------------------------------------

def parse_matrix(text: str) -> np.ndarray:
    """Parse a single matrix literal such as ``[[0.5, 0], [0, 0.5+1i]]``."""
    cur = _Cursor(text, 1, 1)
    mat = cur.matrix()
    cur.end()
    if len({len(r) for r in mat}) != 1:
        cur.fail("rows have different lengths", 0, ShapeError)
    return np.array(mat, dtype=complex)


def _shape_objects(rows: int, cols: int):
    return (UNIT if cols == 1 else as_object(cols)), (UNIT if rows == 1 else as_object(rows))


def parse_weighted_set(text: str, category=MATRIX) -> WeightedSet:
    """Parse ``weight | matrix`` records; each matrix is embedded in ``category``."""
    items, shape = [], None
    shape_re = re.compile(r"\s*shape\s+(\d+)\s*x\s*(\d+)\s*$")
    for stmt, line, col in _statements(text):
        m = shape_re.match(stmt)
        if m:
            if shape is not None or items:
                raise ParseError("'shape' must come first and only once", line, col)
            shape = (int(m.group(1)), int(m.group(2)))
            if min(shape) < 1:
                raise ParseError("shape entries must be positive", line, col)
            continue
        cur = _Cursor(stmt, line, col)
        at = cur.pos
        w = cur.float_()
        if not (w > 0 and math.isfinite(w)):
            cur.fail("weights must be finite and > 0", at)
        cur.expect("|")
        cur.skip()
        at = cur.pos
        mat = cur.matrix()
        cur.end()
        rows, cols = len(mat), len(mat[0])
        if shape is None:
            shape = (rows, cols)
        _check_shape(cur, mat, shape[0], shape[1], at)
        items.append((np.array(mat, dtype=complex), w))
    if shape is None:
        raise ParseError("empty weighted-set file needs a 'shape R x C' line", 1, 1)
    dom, cod = _shape_objects(*shape)
    return WeightedSet(dom, cod, tuple((category.embed(Morphism(dom, cod, a)), w)
                                       for a, w in items))


def serialize_weighted_set(ws: WeightedSet) -> str:
    out = [f"shape {max(ws.cod.dim, 1)} x {max(ws.dom.dim, 1)}"]
    for m, w in ws.items:
        if not isinstance(m, Morphism):
            raise ShapeError("only matrix items can be written as Kraus records", 1, 1)
        out.append(f"{w!r} | {format_matrix(m.mat)}")
    return "\n".join(out) + "\n"


def load_weighted_set(path: str, category=MATRIX) -> WeightedSet:
    with open(path, encoding="utf-8") as fh:
        return parse_weighted_set(fh.read(), category)
