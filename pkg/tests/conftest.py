import re

import numpy as np
import pytest

from seqcover.projgeom import build_geometry

_acceptance_lines: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--heavy", action="store_true", default=False, help="run long-running checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--heavy"):
        return
    skip = pytest.mark.skip(reason="needs --heavy")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)
            m = re.match(r"test_(\d+)_", item.name)
            if m and item.module.__name__.endswith("test_acceptance"):
                _acceptance_lines.append(
                    f"criterion {int(m.group(1)):2d}: SKIPPED  {item.name} (rerun with --heavy)"
                )


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda ln: int(ln.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def _report(number: int, ok: bool, detail: str, status: str | None = None):
        line = f"criterion {number:2d}: {status or ('PASS' if ok else 'FAIL')}  {detail}"
        print(line)
        _acceptance_lines.append(line)
        assert ok, line

    return _report


@pytest.fixture(scope="session")
def plane():
    cache = {}

    def get(q):
        if q not in cache:
            cache[q] = build_geometry(2, q)
        return cache[q]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
