import os
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from fixlat.endomap import Endomap  # noqa: E402
from fixlat.formats import load_instance  # noqa: E402
from fixlat.lab.instances import Instance  # noqa: E402
from fixlat.order import FinitePoset, _closure, build_poset  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data_path(*parts):
    return os.path.normpath(os.path.join(DATA, *parts))


@pytest.fixture
def d4():
    return build_poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


@pytest.fixture
def v3():
    return build_poset(["a", "b", "t"], [("a", "t"), ("b", "t")])


@pytest.fixture
def a2():
    return build_poset(["a", "b"], [])


def chain_poset(n):
    return build_poset([str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)])


@pytest.fixture
def load():
    return lambda name: load_instance(data_path("instances", name))


@st.composite
def posets(draw, min_size=1, max_size=6):
    n = draw(st.integers(min_size, max_size))
    perm = draw(st.permutations(range(n)))
    rel = np.eye(n, dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            if draw(st.booleans()):
                rel[perm[a], perm[b]] = True
    return FinitePoset([f"x{i}" for i in range(n)], _closure(rel))


@st.composite
def instances(draw, min_size=1, max_size=6, poset_strategy=None):
    p = draw(poset_strategy or posets(min_size, max_size))
    n = len(p)
    table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    a0 = draw(st.integers(0, n - 1))
    return Instance(p, Endomap(p, table), a0)


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    """Record ``(number, ok, detail)`` for the end-of-run acceptance summary."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES[number] = line
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
