import itertools

import pytest

from exchtest.seqtypes import BinarySequence


def all_binary(n):
    for key in itertools.product((0, 1), repeat=n):
        yield BinarySequence(key)


@pytest.fixture
def seq():
    from exchtest.seqtypes import parse_sequence

    return parse_sequence


# Pass/fail lines collected by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
