import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cutvor.graph import Multigraph  # noqa: E402


@pytest.fixture
def k3():
    return Multigraph(3, ((0, 1), (0, 2), (1, 2)))


@pytest.fixture
def k4():
    return Multigraph(4, tuple((i, j) for i in range(4) for j in range(i + 1, 4)))


@pytest.fixture
def triple_edge():
    return Multigraph(2, ((0, 1),) * 3)


@pytest.fixture
def path3():
    return Multigraph(3, ((0, 1), (1, 2)))


@pytest.fixture
def c4():
    return Multigraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


_acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_acceptance_key, [])

    def record(number: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_key, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
