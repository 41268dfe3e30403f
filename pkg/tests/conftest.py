import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bornforge import builtin

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def fhilb2():
    return builtin("fhilb", k=2)


@pytest.fixture(scope="session")
def textbook():
    return builtin("textbook")


@pytest.fixture(scope="session")
def cp():
    return builtin("cp")


@pytest.fixture(scope="session")
def stoch():
    return builtin("stoch")


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {detail}")
