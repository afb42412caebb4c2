import functools

import pytest

from genofv.analysis import fine_mesh_reference

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def _reference(case: str, n: int):
    return fine_mesh_reference(case, n)


@pytest.fixture(scope="session")
def reference():
    """Cached GENO6 fine-mesh reference, keyed by (case, cells)."""
    return _reference


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
