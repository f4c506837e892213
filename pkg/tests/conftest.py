from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from pobsfh.corpus import entries
from pobsfh.randomize import random_nice_diagrams

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
RANDOM_SEED = 7
RANDOM_COUNT = 120


@pytest.fixture(scope="session")
def corpus():
    return {e.name: e.diagram() for e in entries()}


@pytest.fixture(scope="session")
def random_cases():
    return list(random_nice_diagrams(RANDOM_SEED, RANDOM_COUNT))


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.lines():
        terminalreporter.write_line(line)
