import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def unit_vectors(dim: int):
    """Hypothesis strategy for unit vectors, built from bounded normal-ish components."""
    comp = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return (st.lists(comp, min_size=dim, max_size=dim)
            .map(np.array)
            .filter(lambda v: np.linalg.norm(v) > 0.1)
            .map(lambda v: v / np.linalg.norm(v)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
