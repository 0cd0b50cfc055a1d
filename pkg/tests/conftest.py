import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tribeam.hilbert import MODES, StateVector
from tribeam.optics import paper_circuit_state

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
phases = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)


@st.composite
def unit_states(draw, basis=MODES):
    re = draw(st.lists(finite, min_size=len(basis), max_size=len(basis)))
    im = draw(st.lists(finite, min_size=len(basis), max_size=len(basis)))
    v = np.array(re) + 1j * np.array(im)
    nrm = np.linalg.norm(v)
    if nrm < 1e-3:
        v = np.zeros(len(basis), dtype=complex)
        v[0] = 1.0
        nrm = 1.0
    return StateVector(basis, v / nrm)


@pytest.fixture
def psi():
    return paper_circuit_state()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
