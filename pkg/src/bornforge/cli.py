"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
errors (bad flags, unreadable or malformed input files).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import linalg as la
from . import noise as nz
from . import quotient as qt
from .dsl import generator_morphism, load_theory_file, load_weighted_set, parse_matrix, to_theory
from .errors import BornforgeError, NotContraction, NotMember, ParseError, UnsupportedTheory
from .harness import SuiteConfig, mutation_tests, run_suite
from .linalg import UNIT, Morphism, as_object
from .report import build_report, report_passed, to_jsonable, write_report
from .theory import BUILTIN_NAMES, builtin, check_axiom

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
U64 = 2 ** 64


class UsageError(Exception):
    pass


def _seed(text) -> int:
    try:
        v = int(text, 0) if isinstance(text, str) else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text!r}")
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def _positive_int(text) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("theory and run options")
    g.add_argument("--builtin", choices=BUILTIN_NAMES + ("fhilb_k", "textbook_qm"),
                   help="built-in theory")
    g.add_argument("--k", type=_positive_float, default=2.0, help="Born exponent for fhilb")
    g.add_argument("--theory", metavar="PATH", help="theory definition file")
    g.add_argument("--seed", type=_seed, default=None,
                   help="root seed (default: $BORNFORGE_SEED, else 0)")
    g.add_argument("--samples", type=_positive_int, default=200, help="samples per claim")
    g.add_argument("--tol", type=_positive_float, default=la.ATOL, help="exact-identity tolerance")
    g.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    g.add_argument("--format", choices=("json", "text"), default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="bornforge", description="Verify probabilistic process theories.")
    p.add_argument("--version", action="version", version=f"bornforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("check-axioms", parents=[common], help="check axioms I-III")

    q = sub.add_parser("quotient", parents=[common], help="canonicalize morphisms")
    q.add_argument("names", nargs="*", help="generator names from --theory (default: all)")
    q.add_argument("--matrix", action="append", default=[], help="matrix literal (repeatable)")

    d = sub.add_parser("dilate", parents=[common], help="unitary dilation of a contraction")
    d.add_argument("--matrix", required=True, help='contraction, e.g. "[[0.5,0],[0,0.5]]"')

    n = sub.add_parser("noise", parents=[common], help="prob_S or equiv_noisy on weighted sets")
    n.add_argument("first", help="weighted-set file")
    n.add_argument("second", help="weighted-set file")
    n.add_argument("--op", choices=("auto", "prob", "equiv"), default="auto")
    n.add_argument("--mode", choices=("canonical", "probe"), default="canonical")

    v = sub.add_parser("verify", parents=[common], help="full claim suite plus mutation tests")
    v.add_argument("--workers", type=_positive_int, default=1)
    v.add_argument("--no-mutants", action="store_true", help="skip the planted-fault run")

    c = sub.add_parser("compare-kraus", parents=[common], help="compare two weighted Kraus lists")
    c.add_argument("first", help="weighted-set file")
    c.add_argument("second", help="weighted-set file")
    return p


# -- helpers -----------------------------------------------------------------

def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BORNFORGE_SEED")
    if env:
        try:
            return _seed(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"BORNFORGE_SEED: {exc}")
    return 0


def _theory(args, default: str = None):
    if args.builtin and args.theory:
        raise UsageError("give either --builtin or --theory, not both")
    if args.theory:
        try:
            return to_theory(load_theory_file(args.theory))
        except NotMember as exc:
            raise UsageError(f"{args.theory}: {exc}")
    name = args.builtin or default
    if name is None:
        raise UsageError("a theory is required: use --builtin or --theory")
    return builtin(name, k=args.k)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(args, default: str = "text") -> str:
    return args.format or default


def _matrix_morphism(text: str) -> Morphism:
    a = parse_matrix(text)
    rows, cols = a.shape
    return Morphism(UNIT if cols == 1 else as_object(cols), UNIT if rows == 1 else as_object(rows), a)


def _mat_text(a, indent: str = "  ") -> str:
    a = np.asarray(a)
    fmt = lambda z: f"{z.real:+.6f}{z.imag:+.6f}i"
    return "\n".join(indent + " ".join(fmt(z) for z in row) for row in a)


def _dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


# -- commands ----------------------------------------------------------------

def cmd_check_axioms(args) -> int:
    t = _theory(args)
    seed = _resolve_seed(args)
    reports = []
    for which in ("I", "II", "III"):
        rng = np.random.default_rng([seed, ord(which[-1]), len(which)])
        n = max(args.samples, 256) if which == "III" else args.samples
        reports.append(check_axiom(t, which, n, rng, args.tol))
    ok = all(r.passed for r in reports)
    if _fmt(args) == "json":
        _emit(args, _dumps({"theory": t.name, "seed": seed, "passed": ok, "axioms": [
            {"axiom": r.axiom, "passed": r.passed, "samples": r.samples,
             "worst_deviation": r.worst_deviation, "counterexample": r.counterexample,
             "witnesses": r.witnesses, "measure": r.measure} for r in reports]}))
    else:
        lines = [f"theory {t.name}  seed={seed}"]
        for r in reports:
            lines.append(f"  axiom {r.axiom:3s} {'PASS' if r.passed else 'FAIL'}  "
                         f"worst={r.worst_deviation:.3e}  n={r.samples}")
            if r.counterexample:
                lines.append(f"    counterexample: {to_jsonable(r.counterexample)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_quotient(args) -> int:
    t = _theory(args)
    items = []
    if args.theory:
        tf = load_theory_file(args.theory)
        names = args.names or [g.name for g in tf.generators]
        for nm in names:
            items.append((nm, t.category.embed(generator_morphism(tf, tf.generator(nm)))))
    elif args.names:
        raise UsageError("generator names need --theory")
    for i, text in enumerate(args.matrix):
        items.append((f"m{i}", t.category.embed(_matrix_morphism(text))))
    if not items:
        raise UsageError("nothing to canonicalize: give generator names or --matrix")
    classes, labels = [], []
    for nm, m in items:
        c = qt.canonicalize(t, m)
        for j, rep in enumerate(classes):
            if rep.dom == c.dom and rep.cod == c.cod and rep == c:
                labels.append(j)
                break
        else:
            classes.append(c)
            labels.append(len(classes) - 1)
    if _fmt(args) == "json":
        _emit(args, _dumps({"theory": t.name, "morphisms": [
            {"name": nm, "class": lab, "canonical": qt.canonicalize(t, m).canon}
            for (nm, m), lab in zip(items, labels)]}))
    else:
        lines = [f"theory {t.name}: {len(items)} morphisms in {len(classes)} classes"]
        for (nm, m), lab in zip(items, labels):
            lines.append(f"{nm}  class {lab}  {m.dom!r} -> {m.cod!r}")
            lines.append(_mat_text(qt.canonicalize(t, m).canon))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dilate(args) -> int:
    f = _matrix_morphism(args.matrix)
    try:
        x = qt.stinespring_dilate(f)
    except NotContraction as exc:
        sys.stderr.write(f"bornforge dilate: {exc}\n")
        return EXIT_FAIL
    err = la.max_abs(qt.g_collapse(x).mat - f.mat)
    u = x.U.mat
    unitarity = la.max_abs(u.conj().T @ u - np.eye(u.shape[0]))
    ok = err < 1e-7 and unitarity < 1e-7
    if _fmt(args) == "json":
        _emit(args, _dumps({"U": x.U, "rho": x.rho, "sigma": x.sigma,
                            "round_trip_error": err, "unitarity_error": unitarity, "passed": ok}))
    else:
        lines = [f"U : {x.U.dom!r} -> {x.U.cod!r}  ({u.shape[0]}x{u.shape[1]})", _mat_text(u),
                 f"rho : I -> {x.rho.cod!r}", _mat_text(x.rho.mat.T),
                 f"sigma : {x.sigma.dom!r} -> I", _mat_text(x.sigma.mat),
                 f"round-trip error {err:.3e}", f"unitarity error {unitarity:.3e}"]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _base_and_sets(args):
    t = _theory(args, default="fhilb")
    cat = t.category
    a = load_weighted_set(args.first, cat)
    b = load_weighted_set(args.second, cat)
    return t, a, b


def _fmt_norm(d: float) -> str:
    # rounded to the 1e-12 resolution used for Choi comparisons
    return f"{round(d, 12):g}"


def _equiv(t, a, b, seed, args):
    rng = np.random.default_rng(seed)
    canon = nz.has_noisy_canonical(t)
    delta = la.max_abs(nz.summed_choi(a) - nz.summed_choi(b)) if canon else None
    res = nz.equiv_noisy(a, b, t, "canonical" if canon else "probe", args.samples, rng)
    witness = None
    if not res.equivalent:
        probe = nz.equiv_noisy(a, b, t, "probe", args.samples, rng)
        witness = probe.witness
    return res, delta, witness


def cmd_noise(args) -> int:
    t, a, b = _base_and_sets(args)
    seed = _resolve_seed(args)
    op = args.op
    if op == "auto":
        states_then_effects = a.dom.dim == 1 and b.cod.dim == 1 and a.cod.dim > 1
        op = "prob" if states_then_effects and a.cod == b.dom else "equiv"
    if op == "prob":
        p = nz.prob_S(a, b, t)
        out = {"theory": t.name, "op": "prob", "probability": p}
        _emit(args, _dumps(out) if _fmt(args) == "json" else f"P_S = {p!r}\n")
        return EXIT_OK
    if args.mode == "probe" or not nz.has_noisy_canonical(t):
        res = nz.equiv_noisy(a, b, t, "probe", args.samples, np.random.default_rng(seed))
        delta = None
    else:
        res = nz.equiv_noisy(a, b, t)
        delta = la.max_abs(nz.summed_choi(a) - nz.summed_choi(b))
    out = {"theory": t.name, "op": "equiv", "mode": args.mode, "equivalent": res.equivalent,
           "max_deviation": res.max_deviation, "delta_choi": delta, "witness": res.witness}
    if _fmt(args) == "json":
        _emit(args, _dumps(out))
    else:
        word = "EQUIVALENT" if res.equivalent else "NOT EQUIVALENT"
        tail = f", ‖ΔChoi‖={_fmt_norm(delta)}" if delta is not None else \
            f", max probe deviation {res.max_deviation:.3e}"
        _emit(args, word + tail + "\n")
    return EXIT_OK if res.equivalent else EXIT_FAIL


def cmd_compare_kraus(args) -> int:
    t, a, b = _base_and_sets(args)
    if a.dom != b.dom or a.cod != b.cod:
        raise UsageError(f"shape mismatch: {a.dom!r}->{a.cod!r} vs {b.dom!r}->{b.cod!r}")
    if not nz.has_noisy_canonical(t):
        raise UsageError(f"compare-kraus needs a theory with a Choi canonical form; {t.name} has none")
    res, delta, witness = _equiv(t, a, b, _resolve_seed(args), args)
    if _fmt(args) == "json":
        _emit(args, _dumps({"theory": t.name, "equivalent": res.equivalent,
                            "delta_choi": delta, "witness": witness}))
    else:
        word = "EQUIVALENT" if res.equivalent else "NOT EQUIVALENT"
        lines = [f"{word}, ‖ΔChoi‖={_fmt_norm(delta)}"]
        if witness:
            lines.append(f"witness: ancilla dim {witness['ancilla_dim']}, "
                         f"P_first={witness['p_first']!r}, P_second={witness['p_second']!r}")
            lines.append("  state:")
            lines.append(_mat_text(np.asarray(witness["state"].mat).T, "    "))
            lines.append("  effect:")
            lines.append(_mat_text(witness["effect"].mat, "    "))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if res.equivalent else EXIT_FAIL


def cmd_verify(args) -> int:
    t = _theory(args)
    cfg = SuiteConfig(seed=_resolve_seed(args), n_samples=args.samples, tol=args.tol,
                      workers=args.workers)
    checks = run_suite(t, cfg)
    muts = None if args.no_mutants else mutation_tests(cfg, strict=False)
    rep = build_report(t, checks, cfg, muts)
    text = write_report(rep, None, _fmt(args, "json"))
    _emit(args, text)
    return EXIT_OK if report_passed(rep) else EXIT_FAIL


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "quotient": cmd_quotient,
    "dilate": cmd_dilate,
    "noise": cmd_noise,
    "verify": cmd_verify,
    "compare-kraus": cmd_compare_kraus,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError, OSError, UnsupportedTheory) as exc:
        sys.stderr.write(f"bornforge {args.command}: {exc}\n")
        return EXIT_USAGE
    except BornforgeError as exc:
        sys.stderr.write(f"bornforge {args.command}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
