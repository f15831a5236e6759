import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE: dict = {}


def record(number: int, passed: bool, summary: str) -> None:
    """Store one acceptance verdict; printed now and again in the terminal summary."""
    line = f"ACCEPTANCE {number:2d}: {'PASS' if passed else 'FAIL'}  {summary}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
