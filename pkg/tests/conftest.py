import pytest
from hypothesis import HealthCheck, settings

from hmf5.fourier_lab import build_generators

settings.register_profile(
    "hmf5", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("hmf5")


@pytest.fixture(scope="session")
def gens10():
    return build_generators(10)


@pytest.fixture(scope="session")
def gens6():
    return build_generators(6)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
