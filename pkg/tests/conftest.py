import json
from pathlib import Path

import pytest

from lefkit import serialize as ser
from lefkit.models import arithmetic_surface_toy, cyc2_graph, reduction_graph_model

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "lefkit" / "fixtures"

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def load_fixture(name):
    return ser.load(json.loads((FIXTURES / name).read_text()))


@pytest.fixture
def toy():
    return arithmetic_surface_toy(2, 6, [[-1]])


@pytest.fixture
def cyc2():
    return reduction_graph_model(cyc2_graph())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
