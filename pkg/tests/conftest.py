from functools import lru_cache

import pytest

from bridgeman.orthospec import build_pants, spectrum


@lru_cache(maxsize=None)
def pants(b1, b2, b3):
    return build_pants(b1, b2, b3)


@lru_cache(maxsize=None)
def cached_spectrum(b, n):
    return spectrum(pants(*b), n)


@pytest.fixture(scope="session")
def spec_of():
    return cached_spectrum


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
