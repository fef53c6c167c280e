from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclotomics(draw, conductors=(1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)):
    from leafix.arith import Cyclotomic, euler_phi
    m = draw(st.sampled_from(conductors))
    coeffs = draw(st.lists(small_fractions, min_size=euler_phi(m), max_size=euler_phi(m)))
    return Cyclotomic(m, coeffs)


def F(x) -> Fraction:
    return Fraction(x)


# acceptance summary: one line per criterion at the end of the run

import pytest

_criteria: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria[number] = (title, "PASS" if rep.passed else "FAIL", rep.duration)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, secs = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({secs:.2f}s)")
