import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dkdv.diffpoly import JET_BASE, UV, DiffPoly
from dkdv.scalar import GaussianRational

settings.register_profile(
    "dkdv",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("dkdv")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(lambda p, q: mpq(p, q), small_ints, st.integers(min_value=1, max_value=5))
gaussians = st.builds(GaussianRational, rationals, rationals)

jet_codes = st.sampled_from([a * JET_BASE + n for a in range(2) for n in range(3)])


@st.composite
def diffpolys(draw, E=4, max_terms=4, max_deg=3, max_eps=3, real=False):
    terms = {}
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        e = draw(st.integers(min_value=0, max_value=max_eps))
        jets = tuple(sorted(draw(st.lists(jet_codes, min_size=0, max_size=max_deg))))
        c = GaussianRational(draw(rationals), 0) if real else draw(gaussians)
        terms[(e, jets)] = c
    return DiffPoly(UV, terms, E)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def record_criterion():
    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record
