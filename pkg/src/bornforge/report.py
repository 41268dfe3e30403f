"""Deterministic JSON and text reports for suite runs.

Key order is fixed by construction and floats are written with ``repr``
precision, so equal inputs give byte-identical files.  Complex numbers and
matrices are written as ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import math
from typing import Any, Optional

import numpy as np

from . import __version__
from .categories import CPMap
from .linalg import Morphism, TheoryObject, WeightedSet

SCHEMA_VERSION = 1

_NUMBER = {"type": ["number", "string"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["tool_version", "schema_version", "seed", "theory", "config", "claims", "summary"],
    "properties": {
        "tool_version": {"type": "string"},
        "schema_version": {"const": SCHEMA_VERSION},
        "seed": {"type": "integer", "minimum": 0},
        "theory": {
            "type": "object",
            "required": ["name", "rule", "simplified"],
            "properties": {"name": {"type": "string"}, "rule": {"type": "string"},
                           "simplified": {"type": "boolean"}},
        },
        "config": {
            "type": "object",
            "required": ["n_samples", "dims", "tol", "probe_tol"],
        },
        "claims": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["claim_id", "anchor", "verdict", "max_deviation", "samples", "witness"],
                "properties": {
                    "claim_id": {"type": "string"},
                    "anchor": {"type": "string"},
                    "verdict": {"enum": ["pass", "fail", "skipped"]},
                    "max_deviation": {"anyOf": [_NUMBER, {"type": "null"}]},
                    "samples": {"type": "integer", "minimum": 0},
                    "note": {"type": "string"},
                },
            },
        },
        "mutations": {
            "type": "array",
            "items": {"type": "object", "required": ["mutant", "expected", "detected", "failing"]},
        },
        "summary": {
            "type": "object",
            "required": ["total", "pass", "fail", "skipped"],
            "properties": {k: {"type": "integer", "minimum": 0}
                           for k in ("total", "pass", "fail", "skipped")},
        },
    },
}


def _num(x: float):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _cpx(z) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def encode_matrix(m) -> list:
    a = np.asarray(m)
    if a.ndim == 0:
        return _cpx(a.item())
    return [encode_matrix(row) for row in a]


def to_jsonable(x: Any) -> Any:
    """Convert witness values (morphisms, triples, sets, arrays) to JSON data."""
    from .quotient import CanonicalClass, GTriple
    from .noise import NoisyClass
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _num(x)
    if isinstance(x, (complex, np.complexfloating)):
        return _cpx(x)
    if isinstance(x, np.ndarray):
        return encode_matrix(x)
    if isinstance(x, TheoryObject):
        return list(x.factors)
    if isinstance(x, Morphism):
        return {"type": "morphism", "dom": list(x.dom.factors), "cod": list(x.cod.factors),
                "matrix": encode_matrix(x.mat)}
    if isinstance(x, CPMap):
        return {"type": "cp", "dom": list(x.dom.factors), "cod": list(x.cod.factors),
                "choi": encode_matrix(x.choi)}
    if isinstance(x, GTriple):
        return {"type": "triple", "dom": list(x.dom.factors), "cod": list(x.cod.factors),
                "U": to_jsonable(x.U), "rho": to_jsonable(x.rho), "sigma": to_jsonable(x.sigma)}
    if isinstance(x, WeightedSet):
        return {"type": "weighted_set", "dom": list(x.dom.factors), "cod": list(x.cod.factors),
                "items": [{"weight": _num(w), "morphism": to_jsonable(m)} for m, w in x.items]}
    if isinstance(x, (CanonicalClass, NoisyClass)):
        return {"type": "class", "canon": encode_matrix(x.canon)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return repr(x)


def summarize(checks) -> dict:
    counts = {"total": len(checks), "pass": 0, "fail": 0, "skipped": 0}
    for ch in checks:
        counts[ch.verdict] += 1
    return counts


def build_report(theory, checks, config, mutations=None) -> dict:
    """Assemble the report dictionary in its fixed key order."""
    rep = {
        "tool_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "seed": int(config.seed),
        "theory": {"name": theory.name, "rule": theory.rule.describe(),
                   "simplified": bool(theory.simplified)},
        "config": {"n_samples": int(config.n_samples), "dims": [int(d) for d in config.dims],
                   "tol": _num(config.tol), "probe_tol": _num(config.probe_tol)},
        "claims": [
            {"claim_id": ch.claim_id, "anchor": ch.anchor, "verdict": ch.verdict,
             "max_deviation": None if ch.max_deviation is None else _num(ch.max_deviation),
             "samples": int(ch.samples), "witness": to_jsonable(ch.witness), "note": ch.note}
            for ch in checks
        ],
    }
    if mutations is not None:
        rep["mutations"] = [
            {"mutant": r.mutant, "expected": list(r.expected), "detected": bool(r.detected),
             "failing": list(r.failing)}
            for r in mutations.results
        ]
    rep["summary"] = summarize(checks)
    return rep


def report_passed(rep: dict) -> bool:
    muts = rep.get("mutations", [])
    return rep["summary"]["fail"] == 0 and all(m["detected"] for m in muts)


def dumps_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def dumps_text(rep: dict) -> str:
    th = rep["theory"]
    lines = [f"bornforge {rep['tool_version']}  theory={th['name']}  rule={th['rule']}  "
             f"simplified={th['simplified']}  seed={rep['seed']}"]
    width = max((len(c["claim_id"]) for c in rep["claims"]), default=0)
    for c in rep["claims"]:
        dev = c["max_deviation"]
        dev_s = "-" if dev is None else (f"{dev:.3e}" if isinstance(dev, float) else str(dev))
        extra = f"  ({c['note']})" if c.get("note") and c["verdict"] == "skipped" else ""
        lines.append(f"  {c['verdict'].upper():8s} {c['claim_id']:{width}s}  "
                     f"dev={dev_s:>10s}  n={c['samples']}{extra}")
    for m in rep.get("mutations", []):
        state = "detected" if m["detected"] else "MISSED"
        lines.append(f"  MUTANT   {m['mutant']}: {state} by {', '.join(m['failing']) or '-'}")
    s = rep["summary"]
    lines.append(f"summary: {s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped "
                 f"of {s['total']}")
    return "\n".join(lines) + "\n"


def write_report(rep: dict, path: Optional[str], fmt: str = "json") -> str:
    text = dumps_json(rep) if fmt == "json" else dumps_text(rep)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
