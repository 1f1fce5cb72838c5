import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modclass import build_ring, module_corpus  # noqa: E402

SMALL_RINGS = ["zmod:4", "zmod:6", "zmod:8", "zmod:9", "gf:4", "ut2:2"]


@functools.lru_cache(maxsize=None)
def ring(spec: str):
    return build_ring(spec)


@functools.lru_cache(maxsize=None)
def small_modules(max_size: int = 16) -> tuple:
    """(label, module) for every corpus module of size ≤ max_size over SMALL_RINGS."""
    out = []
    for spec in SMALL_RINGS:
        C = module_corpus(ring(spec), max_size, 2)
        out.extend((f"{spec}/{C.label(k)}", C.module(k)) for k in range(len(C)))
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks")


@pytest.fixture
def R4():
    return ring("zmod:4")


@pytest.fixture
def UT():
    return ring("ut2:2")
