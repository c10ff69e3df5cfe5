from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from modlie.chevalley import build_algebra
from modlie.rootsys import parse_group

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def algebra(group: str, p: int):
    return build_algebra(parse_group(group), p)


@pytest.fixture
def alg_factory():
    return algebra


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
