import pytest
from hypothesis import HealthCheck, settings

from cymotive.pipeline import ConstructionSpec, build

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


_BUILDS: dict = {}


def cached_build(**kw):
    spec = ConstructionSpec(**kw)
    if spec not in _BUILDS:
        _BUILDS[spec] = build(spec)
    return _BUILDS[spec]


@pytest.fixture
def kummer():
    return cached_build(construction="ch-z2", n=2)
