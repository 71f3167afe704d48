import math
from pathlib import Path

import pytest

from permsum.circuit import IqpCircuit, PhaseGate, read_circuit

DATA = Path(__file__).resolve().parent.parent / "data"

#: <000|C|000> of the three-qubit example, computed from the statevector.
EXAMPLE_AMPLITUDE = complex(0.3479034060844076, 0.5112237766939547)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def example_circuit() -> IqpCircuit:
    return IqpCircuit(
        3,
        (
            (
                PhaseGate(math.pi / 2, (2,)),
                PhaseGate(math.pi / 4, (0, 1)),
                PhaseGate(math.pi / 8, (0, 1, 2)),
            ),
        ),
    )


@pytest.fixture
def example_ht():
    return read_circuit((DATA / "example.ht").read_text())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
