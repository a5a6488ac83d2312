import contextlib
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from commeq.algebra import make_set_algebra  # noqa: E402
from commeq.library import (  # noqa: E402
    cyclic_group,
    majority_algebra,
    symmetric_group_s3,
    two_element_lattice,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def z4():
    return cyclic_group(4)


@pytest.fixture
def s3():
    return symmetric_group_s3()


@pytest.fixture
def set2():
    return make_set_algebra(2)


@pytest.fixture
def set3():
    return make_set_algebra(3)


@pytest.fixture
def lattice2():
    return two_element_lattice()


@pytest.fixture
def maj2():
    return majority_algebra()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


Z4_FILE = """size 4
op plus 2
0 1 2 3 1 2 3 0 2 3 0 1 3 0 1 2
op neg 1
0 3 2 1
op zero 0
0
"""


@pytest.fixture
def z4_file(tmp_path):
    path = tmp_path / "Z4.alg"
    path.write_text(Z4_FILE)
    return path


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Context manager timing one acceptance criterion and recording its verdict."""

    @contextlib.contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            _record(number, "FAIL", title, f"{elapsed:.2f}s, {type(exc).__name__}: {exc}")
            raise
        elapsed = time.perf_counter() - start
        if elapsed > limit:
            _record(number, "FAIL", title, f"{elapsed:.2f}s exceeds the {limit:g}s limit")
            pytest.fail(f"criterion {number} took {elapsed:.2f}s (limit {limit:g}s)")
        _record(number, "PASS", title, f"{elapsed:.2f}s of {limit:g}s")

    return run


def _record(number, verdict, title, detail):
    line = f"{verdict} criterion {number}: {title} ({detail.splitlines()[0] if detail else ''})"
    _ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
