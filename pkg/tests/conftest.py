import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from fusedpath.instance import ProblemInstance
from fusedpath.pwl import make_pwl
from fusedpath.synthetic import abs_instance, random_instance

CORPUS = Path(__file__).resolve().parents[1] / "src" / "fusedpath" / "corpus"


@pytest.fixture
def inst_a():
    """2|x - 1| and 2|x - 3|."""
    return abs_instance([1, 3], [2, 2])


@pytest.fixture
def inst_three():
    return abs_instance([1, 5, 3], [2, 2, 2])


@pytest.fixture
def tie_instance():
    """At lambda 2 the middle node has two optimal values, 0 and 1."""
    return ProblemInstance([
        make_pwl([10], [-10, 10]),
        make_pwl([0, 1], [-1, 4, 5]),
        make_pwl([10], [-10, 10]),
    ])


def small_corpus(count, seed, **kw):
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


@st.composite
def convex_pwls(draw, max_bps=4, lo=-10, hi=10, max_slope=10):
    k = draw(st.integers(1, max_bps))
    bps = sorted(draw(st.lists(st.integers(lo, hi), min_size=k, max_size=k, unique=True)))
    neg = draw(st.integers(1, k))
    left = sorted(draw(st.lists(st.integers(-max_slope, -1), min_size=neg, max_size=neg,
                                unique=True)))
    right = sorted(draw(st.lists(st.integers(1, max_slope), min_size=k + 1 - neg,
                                 max_size=k + 1 - neg, unique=True)))
    # occasionally allow a flat piece or fractional slopes
    slopes = [Fraction(s, draw(st.sampled_from([1, 1, 2, 3]))) for s in left + right]
    slopes.sort()
    if len(set(slopes)) != len(slopes):
        slopes = left + right
    offset = draw(st.integers(lo, hi))
    return make_pwl(bps, slopes, offset)


@st.composite
def instances(draw, max_n=4, max_bps=3):
    n = draw(st.integers(1, max_n))
    return ProblemInstance([draw(convex_pwls(max_bps=max_bps)) for _ in range(n)])


ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = getattr(item, "acceptance_detail", "")
    status = "PASS" if report.passed else "FAIL"
    line = f"criterion {number} [{status}] {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append((number, line))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
