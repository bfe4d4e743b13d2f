import numpy as np
import pytest

from triwell.sym2 import Sym2

D = Sym2.diag

# Acceptance lines collected by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE: dict = {}


def record_acceptance(number: int, name: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (name, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:>2}. {name}: {detail}")


@pytest.fixture
def type_two_wells():
    return [D(2, -1), D(1, 1), D(0, 0)]


@pytest.fixture
def type_one_wells():
    return [D(1, 1), D(0, -1), D(-1, 0)]


@pytest.fixture
def all_compatible_wells():
    return [D(0, 0), D(1, 0), D(0, 1)]


@pytest.fixture
def all_incompatible_wells():
    return [D(0, 0), D(3, 1), D(4, 4)]


@pytest.fixture
def rank_one_type_one_wells():
    return [D(3, 3), D(0, 0), D(1, 0)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
