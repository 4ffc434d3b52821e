from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from kannanlab import FiniteMetricSpace, SelfMap, make_paper_example, metric_closure

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def spaces(draw, min_size=2, max_size=6):
    size = draw(st.integers(min_size, max_size))
    q = draw(st.sampled_from([1, 2, 6, 12]))
    closure = draw(st.booleans())
    lo, hi = (1, 4 * q) if closure else (q, 2 * q)
    m = [[Fraction(0)] * size for _ in range(size)]
    for i, j in combinations(range(size), 2):
        m[i][j] = m[j][i] = Fraction(draw(st.integers(lo, hi)), q)
    if closure:
        return metric_closure(m)
    return FiniteMetricSpace.from_matrix(m)


@st.composite
def maps(draw, min_size=2, max_size=6):
    space = draw(spaces(min_size, max_size))
    table = draw(st.lists(st.integers(0, space.size - 1),
                          min_size=space.size, max_size=space.size))
    return SelfMap(space, tuple(table))


@pytest.fixture
def e4():
    return make_paper_example(4, 10)


@pytest.fixture
def equilateral3():
    return FiniteMetricSpace.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


# acceptance-criterion reporting: one pass/fail line per criterion
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    label = mark.args[0]
    ok = rep.passed if rep.when == "call" else not rep.failed
    if rep.when == "setup" and ok:
        return
    _criteria[label] = _criteria.get(label, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if _criteria[label] else 'FAIL'}  {label}")
