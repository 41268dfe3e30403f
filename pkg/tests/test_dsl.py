import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bornforge import dsl
from bornforge import linalg as la
from bornforge.categories import CHOI, MATRIX, CPMap
from bornforge.dsl import Generator, TheoryFile, parse_theory, parse_weighted_set, serialize
from bornforge.errors import NotMember, ParseError, ShapeError, UnknownObject
from bornforge.theory import BornPower, StochasticInner, TraceRule, check_axiom, prob

DATA = Path(__file__).parent / "data"
CORPUS = sorted((DATA / "theories").glob("*.bft"))

MINIMAL = """theory qubit
rule born k=2
object q = 2
gen ket0 : I -> q = [[1], [0]]
gen bra0 : q -> I = [[1, 0]]
"""


def header(body: str) -> str:
    return "theory t\nrule born k=2\nobject q = 2\n" + body


def error_at(text, cls=ParseError):
    with pytest.raises(cls) as exc:
        parse_theory(text)
    return exc.value.line, exc.value.col


# -- parsing -----------------------------------------------------------------

def test_minimal_file():
    tf = parse_theory(MINIMAL)
    assert tf.name == "qubit" and tf.rule == "born" and tf.k == 2.0
    assert not tf.simplified
    assert [g.name for g in tf.generators] == ["ket0", "bra0"]
    assert tf.generator("ket0").matrix == ((1 + 0j,), (0j,))
    assert tf.roles_of("ket0") == ("state",) and tf.roles_of("bra0") == ("effect",)


def test_complex_literals():
    tf = parse_theory(header("gen g : q -> q = [[1.5-2i, -0.25+0i], [1e-3+2E2i, .5]]\n"))
    assert tf.generator("g").matrix == ((1.5 - 2j, -0.25 + 0j), (1e-3 + 200j, 0.5 + 0j))


def test_malformed_complex_located_at_i():
    line = "gen g : I -> q = [[1+i2], [0]]"
    assert error_at(header(line + "\n")) == (4, line.index("i2") + 1)


def test_pure_imaginary_rejected():
    with pytest.raises(ParseError, match="0\\+bi"):
        parse_theory(header("gen g : I -> q = [[2i], [0]]\n"))


def test_shape_error_three_entries_for_2x2():
    line = "gen g : q -> q = [[1, 0, 0]]"
    assert error_at(header(line + "\n"), ShapeError) == (4, line.index("[[") + 1)


def test_shape_error_ragged():
    with pytest.raises(ShapeError):
        parse_theory(header("gen g : q -> q = [[1, 0], [0]]\n"))


def test_unknown_object_located():
    line = "gen g : q -> r = [[1, 0]]"
    assert error_at(header(line + "\n"), UnknownObject) == (4, line.index("r =") + 1)


def test_unknown_object_in_product():
    line = "gen g : q * w -> I = [[1, 0, 0, 0]]"
    assert error_at(header(line + "\n"), UnknownObject) == (4, line.index("w") + 1)


def test_unknown_generator_in_role():
    with pytest.raises(UnknownObject):
        parse_theory(header("role nope state\n"))


def test_role_shape_conflict():
    with pytest.raises(ShapeError):
        parse_theory(header("gen g : q -> q = [[1, 0], [0, 1]]\nrole g state\n"))


def test_error_inside_multiline_matrix_reports_its_line():
    text = header("gen g : q -> q = [[1, 0],\n    [0, 1+x]]\n")
    line, col = error_at(text)
    assert line == 5 and col == len("    [0, 1+") + 1


@pytest.mark.parametrize("text,fragment", [
    ("rule born k=2\n", "must start with 'theory"),
    ("theory a\n", "missing 'rule'"),
    ("theory a\ntheory b\nrule trace\n", "duplicate 'theory'"),
    ("theory a\nrule magic\n", "unknown rule"),
    ("theory a\nrule born k=0\n", "k must be positive"),
    ("theory a\nrule trace\nobject I = 2\n", "reserved"),
    ("theory a\nrule trace\nobject q = 0\n", "positive integer"),
    ("theory a\nrule trace\nobject q = 2\nobject q = 3\n", "duplicate object"),
    ("theory a\nrule trace\nsimplified maybe\n", "true or false"),
    ("theory a\nrule trace\nfrobnicate\n", "unknown statement"),
    ("", "empty theory file"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_theory(text)


def test_comments_and_layout():
    tf = parse_theory((DATA / "theories" / "13_comments_layout.bft").read_text())
    assert tf.simplified and tf.generator("ket0").matrix == ((1,), (0,))


def test_explicit_roles_kept():
    tf = parse_theory((DATA / "theories" / "15_multi_roles.bft").read_text())
    assert tf.roles_of("amp") == ("state", "effect", "process")
    assert tf.roles_of("bra0") == ("effect",)


# -- round trip --------------------------------------------------------------

def test_corpus_has_twenty_files():
    assert len(CORPUS) == 20


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    tf = parse_theory(path.read_text())
    text = serialize(tf)
    assert parse_theory(text) == tf
    assert serialize(parse_theory(text)) == text


def test_format_complex_is_exact():
    for z in (0.1 + 0.2j, -1e-300 + 0j, 1 / 3 - 2 / 7j, complex(0.0, -0.0), 2 ** 60 + 1e-5j):
        tf = parse_theory(header(f"gen s : I -> I = [[{dsl.format_complex(z)}]]\n"))
        w = tf.generator("s").matrix[0][0]
        assert w == z and math.copysign(1, w.imag) == math.copysign(1, z.imag)


names = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)
finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
entries = st.builds(complex, finite, finite)


@st.composite
def theory_files(draw):
    obj_names = draw(st.lists(names, min_size=1, max_size=3, unique=True))
    objects = tuple((n, draw(st.integers(1, 3))) for n in obj_names)
    dims = dict(objects)
    expr = st.lists(st.sampled_from(obj_names), max_size=2).map(tuple)
    gens, roles = [], []
    for gname in draw(st.lists(names, max_size=4, unique=True)):
        dom, cod = draw(expr), draw(expr)
        rows, cols = math.prod(dims[n] for n in cod), math.prod(dims[n] for n in dom)
        mat = tuple(tuple(draw(entries) for _ in range(cols)) for _ in range(rows))
        gens.append(Generator(gname, dom, cod, mat))
        allowed = ["process"] + (["state"] if not dom else []) + (["effect"] if not cod else [])
        if draw(st.booleans()):
            roles.append((gname, tuple(draw(st.lists(st.sampled_from(allowed), min_size=1,
                                                     max_size=3, unique=True)))))
    rule = draw(st.sampled_from(dsl.RULES))
    k = draw(st.floats(0.01, 10)) if rule == "born" else None
    return TheoryFile(draw(names), rule, k, draw(st.booleans()), objects, tuple(gens), tuple(roles))


@given(theory_files())
def test_generated_round_trip(tf):
    assert parse_theory(serialize(tf)) == tf


# -- building theories -------------------------------------------------------

def test_to_theory_rules():
    assert isinstance(dsl.to_theory(parse_theory(MINIMAL)).rule, BornPower)
    t = dsl.load_theory(DATA / "theories" / "09_trace_states.bft")
    assert isinstance(t.rule, TraceRule) and t.category is CHOI
    t = dsl.load_theory(DATA / "theories" / "11_stochastic_bits.bft")
    assert isinstance(t.rule, StochasticInner) and t.category is MATRIX and not t.simplified


def test_file_theory_probability():
    t = dsl.load_theory(DATA / "theories" / "02_hadamard.bft")
    tf = dsl.load_theory_file(DATA / "theories" / "02_hadamard.bft")
    ket0 = dsl.generator_morphism(tf, tf.generator("ket0"))
    had = dsl.generator_morphism(tf, tf.generator("had"))
    bra1 = dsl.generator_morphism(tf, tf.generator("bra1"))
    assert abs(prob(t, la.compose(had, ket0), bra1) - 0.5) <= 1e-15


def test_non_simplified_born_rejects_non_unitary_process():
    text = "theory t\nrule born k=2\nobject q = 2\ngen p : q -> q = [[1, 0], [0, 0]]\nrole p process\n"
    with pytest.raises(NotMember):
        dsl.to_theory(parse_theory(text))


def test_stochastic_rejects_negative_state():
    text = "theory t\nrule stochastic\nobject b = 2\ngen s : I -> b = [[-0.5], [1.5]]\n"
    with pytest.raises(NotMember):
        dsl.to_theory(parse_theory(text))


@pytest.mark.parametrize("path", [p for p in CORPUS if p.stem not in {
    "01_qubit_minimal", "13_comments_layout", "14_scalars", "16_mixed_dims", "18_no_generators"}],
    ids=lambda p: p.stem)
def test_corpus_theories_satisfy_axioms(path):
    t = dsl.load_theory(path)
    for which in ("I", "II", "III"):
        assert check_axiom(t, which, 25, np.random.default_rng(0)).passed, which


def test_all_ones_theory_is_trivial():
    # only |0> and <0| are declared, so every probability is 1
    t = dsl.load_theory(DATA / "theories" / "01_qubit_minimal.bft")
    rep = check_axiom(t, "III", 50, np.random.default_rng(0))
    assert not rep.passed and rep.counterexample == {"missing": ["non_one"]}


def test_trace_file_discard():
    from bornforge.theory import check_discard
    t = dsl.load_theory(DATA / "theories" / "09_trace_states.bft")
    assert check_discard(t, n_samples=20, rng=np.random.default_rng(0)).passed


# -- weighted sets -----------------------------------------------------------

def test_weighted_set_file():
    ws = dsl.load_weighted_set(DATA / "ws" / "mix01.ws")
    assert ws.dom == la.UNIT and ws.cod == la.as_object(2)
    assert ws.weights.tolist() == [0.5, 0.5]


def test_weighted_set_cp_category():
    ws = dsl.load_weighted_set(DATA / "ws" / "kraus_dephase.ws", CHOI)
    assert all(isinstance(m, CPMap) for m, _ in ws.items)


def test_empty_weighted_set_needs_shape():
    assert dsl.load_weighted_set(DATA / "ws" / "empty_state.ws").is_zero
    with pytest.raises(ParseError):
        parse_weighted_set("# nothing\n")


@pytest.mark.parametrize("text,cls", [
    ("0 | [[1]]\n", ParseError),
    ("-1 | [[1]]\n", ParseError),
    ("0.5 [[1]]\n", ParseError),
    ("1 | [[1], [0]]\n1 | [[1, 0]]\n", ShapeError),
    ("1 | [[1]]\nshape 1 x 1\n", ParseError),
])
def test_weighted_set_errors(text, cls):
    with pytest.raises(cls):
        parse_weighted_set(text)


@given(st.lists(st.tuples(st.floats(1e-6, 1e6), st.lists(entries, min_size=2, max_size=2)),
                max_size=5))
def test_weighted_set_round_trip(records):
    ws = la.WeightedSet(la.UNIT, 2, tuple((la.state(v), w) for w, v in records))
    back = parse_weighted_set(dsl.serialize_weighted_set(ws))
    assert back.dom == ws.dom and back.cod == ws.cod and len(back) == len(ws)
    for (a, w), (b, v) in zip(ws.items, back.items):
        assert w == v and np.array_equal(a.mat, b.mat)


def test_parse_matrix():
    assert np.array_equal(dsl.parse_matrix("[[0.5, 0], [0, 0.5]]"), 0.5 * np.eye(2))
    with pytest.raises(ShapeError):
        dsl.parse_matrix("[[1, 2], [3]]")
