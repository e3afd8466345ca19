import pytest

from orbidual.engine import make_instance
from orbidual.invertible import ExponentMatrix, grading_operator
from orbidual.symmetry import parse_permutation
from orbidual.torsion import TorsionVector

# two 4-loops swapped or not, plus a Fermat x5^5
EX_ROWS = [[4, 1, 0, 0, 0], [1, 4, 0, 0, 0], [0, 0, 4, 1, 0], [0, 0, 1, 4, 0], [0, 0, 0, 0, 5]]

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def example_instance(perm: str, name: str):
    E = ExponentMatrix(EX_ROWS)
    gens = [
        TorsionVector.from_ints(3, [1, 2, 0, 0, 0]),
        TorsionVector.from_ints(3, [0, 0, 1, 2, 0]),
        grading_operator(E),
    ]
    return make_instance(E, gens, parse_permutation(perm, 5), name)


@pytest.fixture(scope="session")
def swap13_24():
    return example_instance("(1 3)(2 4)", "swap13_24")


@pytest.fixture(scope="session")
def swap12_34():
    return example_instance("(1 2)(3 4)", "swap12_34")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
