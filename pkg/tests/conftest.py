import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from iqpkit.f2la import BitMatrix

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("default")


@st.composite
def bitmatrices(draw, max_rows=12, max_cols=12, min_rows=0, min_cols=0):
    nrows = draw(st.integers(min_rows, max_rows))
    ncols = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << ncols) - 1), min_size=nrows, max_size=nrows))
    return BitMatrix.from_rows(rows, ncols)


@st.composite
def invertibles(draw, max_n=10):
    from iqpkit.f2la import random_invertible
    from iqpkit.rng import make_rng

    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32))
    return random_invertible(n, make_rng(seed, "test-invertible"))


def unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
