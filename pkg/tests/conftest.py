import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from supertrop import Scalar, TropMatrix  # noqa: E402
from supertrop.scalar import ZERO  # noqa: E402

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# a small value range makes ties (and so ghosts) common
values = st.one_of(
    st.integers(-4, 4),
    st.fractions(min_value=-4, max_value=4, max_denominator=3),
)


@st.composite
def scalars(draw, zero=True, ghost=True):
    if zero and draw(st.integers(0, 9)) == 0:
        return ZERO
    v = draw(values)
    g = draw(st.booleans()) if ghost else False
    return Scalar(Fraction(v), g)


@st.composite
def matrices(draw, n=None, max_n=4, ghost=True):
    n = draw(st.integers(1, max_n)) if n is None else n
    return TropMatrix([[draw(scalars(ghost=ghost)) for _ in range(n)] for _ in range(n)])


def M(text):
    from supertrop import parse_matrix

    return parse_matrix(text)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
