from fractions import Fraction

from hypothesis import strategies as st

from lskdv.lattice import QuadParams

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=50)
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def quad_params(draw, gauge=True):
    """Distinct nonzero squares for alpha1, alpha2 so that beta0 stays rational."""
    s = draw(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=12))
    t = draw(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=12))
    if s == t:
        t = t + 1
    if not gauge:
        return QuadParams(s * s, t * t)
    a0 = draw(nonzero_rationals)
    sign = draw(st.sampled_from((1, -1)))
    return QuadParams.from_alphas(s * s, t * t, a0, sign)


# one verdict line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
