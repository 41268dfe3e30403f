import json
import math

import jsonschema
import numpy as np
import pytest

from bornforge import linalg as la
from bornforge import report as rp
from bornforge.categories import CPMap
from bornforge.harness import SuiteConfig, mutation_tests, run_suite
from bornforge.linalg import UNIT, WeightedSet
from bornforge.quotient import g_embed
from bornforge.theory import builtin

CFG = SuiteConfig(seed=11, n_samples=20)


@pytest.fixture(scope="module", params=["fhilb", "textbook", "cp", "stoch"])
def report(request):
    t = builtin(request.param)
    muts = mutation_tests(CFG, strict=False) if request.param == "fhilb" else None
    return rp.build_report(t, run_suite(t, CFG), CFG, muts)


def test_report_validates(report):
    jsonschema.validate(json.loads(rp.dumps_json(report)), rp.REPORT_SCHEMA)


def test_schema_is_valid_draft():
    jsonschema.Draft202012Validator.check_schema(rp.REPORT_SCHEMA)


def test_summary_matches_tallies(report):
    s = report["summary"]
    verdicts = [c["verdict"] for c in report["claims"]]
    assert s["total"] == len(verdicts)
    for k in ("pass", "fail", "skipped"):
        assert s[k] == verdicts.count(k)


def test_key_order_fixed(report):
    assert list(report)[:6] == ["tool_version", "schema_version", "seed", "theory", "config", "claims"]
    assert list(report)[-1] == "summary"
    assert list(report["claims"][0]) == ["claim_id", "anchor", "verdict", "max_deviation",
                                         "samples", "witness", "note"]


def test_dumps_is_byte_stable():
    t = builtin("stoch")
    a = rp.dumps_json(rp.build_report(t, run_suite(t, CFG), CFG))
    b = rp.dumps_json(rp.build_report(t, run_suite(t, CFG), CFG))
    assert a == b and a.endswith("\n")


def test_schema_rejects_bad_verdict(report):
    bad = json.loads(rp.dumps_json(report))
    bad["claims"][0]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, rp.REPORT_SCHEMA)


def test_report_passed_flags_failures(report):
    assert rp.report_passed(report)
    broken = json.loads(rp.dumps_json(report))
    broken["summary"]["fail"] = 1
    assert not rp.report_passed(broken)


def test_text_format(report):
    text = rp.dumps_text(report)
    assert report["theory"]["name"] in text
    assert len([ln for ln in text.splitlines() if ln.strip().startswith(("PASS", "FAIL", "SKIP"))]) \
        <= len(report["claims"])


def test_write_report(tmp_path, report):
    p = tmp_path / "r.json"
    text = rp.write_report(report, str(p), "json")
    assert p.read_text() == text


# -- encoding ----------------------------------------------------------------

def test_encode_matrix_pairs():
    assert rp.encode_matrix(np.array([[1 + 2j, 0]])) == [[[1.0, 2.0], [0.0, 0.0]]]


def test_nonfinite_numbers_become_strings():
    assert rp.to_jsonable(math.inf) == "inf"
    assert rp.to_jsonable(float("nan")) == "nan"
    json.dumps(rp.to_jsonable({"x": [math.inf, -math.inf]}), allow_nan=False)


def test_to_jsonable_library_types():
    t = builtin("textbook")
    values = [la.state([1, 0]), CPMap.from_density(np.eye(2) / 2), WeightedSet.single(la.scalar(1), 0.5),
              g_embed(t, la.state([0, 1])), UNIT, np.float64(0.5), np.int64(3), (1, 2), {"k": np.bool_(True)}]
    for v in values:
        json.dumps(rp.to_jsonable(v), allow_nan=False)
