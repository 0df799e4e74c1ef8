import numpy as np
import pytest
from hypothesis import settings, strategies as st

from sxvreach.graph import build_graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# criterion id -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict = {}


@st.composite
def digraphs(draw, max_n=12, weighted=False, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    raw = draw(st.lists(pairs, max_size=3 * n))
    if weighted:
        ws = draw(st.lists(st.integers(1, 50), min_size=len(raw), max_size=len(raw)))
    else:
        ws = [1] * len(raw)
    return build_graph(n, [(u, v, float(w)) for (u, v), w in zip(raw, ws)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
