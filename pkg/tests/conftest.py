from pathlib import Path

import pytest

from edgeguess import SpeechMode, read_edge_list
from edgeguess.labeling import SIMULTANEOUS

FIXTURES = Path(__file__).parent / "fixtures"

ALL_MODES = [SIMULTANEOUS, SpeechMode.alternating("A"), SpeechMode.alternating("B")]


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return read_edge_list(FIXTURES / name)


@pytest.fixture
def two_colour_tree():
    return load("two_colour_tree.edges")


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
