import pytest

from entatlas.atlas import discover_classes, enumerate_forms
from entatlas.catalog import build_catalog
from entatlas.qstate import State


@pytest.fixture(scope="session")
def catalog():
    return build_catalog()


@pytest.fixture(scope="session")
def secant_table():
    """One discovery pass over all L=M=0 forms; signatures carry the four
    invariant bits in front, so the nullcone partition is the restriction
    to signatures starting (0,0,0,0).  Shared by the atlas and acceptance
    tests (the heaviest computation in the suite)."""
    forms = enumerate_forms("secant3")
    return forms, discover_classes(forms)


def ket_state(*kets) -> State:
    amps = [0] * 16
    for i1, i2, i3, i4 in kets:
        amps[i1 + 2 * i2 + 4 * i3 + 8 * i4] = 1
    return State(amps)


@pytest.fixture
def ghz():
    return ket_state((0, 0, 0, 0), (1, 1, 1, 1))


@pytest.fixture
def w_state():
    return ket_state((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0))
