from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from ecl.syntax import Signature, parse_formula

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def sig_of(text: str) -> Signature:
    return Signature.parse(text)


def P(text: str, sig: Signature):
    return parse_formula(text, sig)


@pytest.fixture
def lr_sig():
    return sig_of("(fun L 1) (fun R 1)")


@pytest.fixture
def f_sig():
    return sig_of("(fun F 1)")


@pytest.fixture
def fc_sig():
    return sig_of("(fun F 1) (const c)")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("tests.test_acceptance")
    if acceptance is not None and acceptance.REPORTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.REPORTS:
            terminalreporter.write_line(line)
