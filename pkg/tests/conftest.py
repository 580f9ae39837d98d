import numpy as np
import pytest

from sgweno.mesh import DomainBox, GridSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def square():
    return DomainBox.cube(-2.0, 2.0, 2)


@pytest.fixture
def small_grid(square):
    return GridSpec(square, 10, (1, 0))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record and assert one acceptance criterion."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
