import numpy as np
import pytest

from renyi.families import CellFamily
from renyi.measure import AtomSpace, DiscreteMeasure


@pytest.fixture
def abc():
    """Atoms a, b, c as ids 0, 1, 2."""
    return AtomSpace.range(3)


@pytest.fixture
def overlap3(abc):
    """Uniform measure on three atoms with cells {a,b} and {b,c}."""
    return DiscreteMeasure.uniform(abc), CellFamily(({0, 1}, {1, 2}), "Q")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Append ``(criterion, passed, detail)`` rows shown in the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_ACCEPTANCE, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in rows:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
