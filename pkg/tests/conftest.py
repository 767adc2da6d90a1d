import numpy as np
import pytest

from sasaki import charts


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def sphere():
    return charts.sphere2(1.0)


@pytest.fixture
def halfplane():
    return charts.halfplane()


def sphere_embedding(x):
    t, p = x
    return np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])


ALL_MANIFOLDS = [m.name for m in charts.builtin_manifolds()]


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict = {}


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
