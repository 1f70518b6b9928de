from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import pytest

from crossjoin import DigraphParams, enumerate_cycles, validate

GOLDEN = Path(__file__).parent / "golden"


def golden(name: str) -> str:
    return (GOLDEN / name).read_text()


def golden_rows(name: str) -> list[tuple[int, ...]]:
    return [
        tuple(int(t) for t in line.split(","))
        for line in golden(name).splitlines()
        if line.strip() and not line.startswith("#")
    ]


@lru_cache(maxsize=None)
def all_cycles(N: int, d: int):
    return tuple(enumerate_cycles(DigraphParams(N, d)))


def successor_oracle(N: int, d: int, x: int) -> list[int]:
    return [(d * x + r) % N for r in range(d)]


def walk_successor_map(succ: dict[int, int], start: int = 0) -> list[int]:
    out = [start]
    x = succ[start]
    while x != start and len(out) <= len(succ):
        out.append(x)
        x = succ[x]
    return out


@pytest.fixture
def p16():
    return DigraphParams(16, 2)


@pytest.fixture
def path_largest():
    return golden_rows("path_largest_N16_d2.txt")


@pytest.fixture
def path_smallest():
    return golden_rows("path_smallest_N16_d2.txt")


@pytest.fixture
def prefer_one_16(p16, path_largest):
    return validate(p16, path_largest[0])


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(ident, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    ident, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.outcome == "passed" else "FAIL"
        prev = _ACCEPTANCE.get(ident)
        if prev is None or prev[0] == "PASS":
            _ACCEPTANCE[ident] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident in sorted(_ACCEPTANCE, key=lambda s: int(s[2:])):
        status, title = _ACCEPTANCE[ident]
        terminalreporter.write_line(f"{ident:<5} {status}  {title}")
