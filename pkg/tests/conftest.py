import numpy as np
import pytest
from hypothesis import strategies as st

from eisenstein_lk import _kernels
from eisenstein_lk.group import IwasawaFactors, exp_alg, reconstruct

coord = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
algebra_vectors = st.tuples(coord, coord, coord)
small_vectors = st.tuples(*[st.floats(min_value=-0.3, max_value=0.3, allow_nan=False)] * 3)
lambdas = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False)


@st.composite
def group_elements(draw, scale=1.0):
    v = draw(algebra_vectors)
    w = draw(algebra_vectors)
    return exp_alg(np.array(v) * scale) @ exp_alg(np.array(w) * scale)


def random_element(rng, scale=0.6):
    return exp_alg(rng.normal(size=3) * scale) @ exp_alg(rng.normal(size=3) * scale)


def random_iwasawa(rng, bound=0.5):
    s, t = rng.uniform(-bound, bound, 2)
    return reconstruct(IwasawaFactors(s, t, rng.uniform(0, 2 * np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    previous = _kernels.get_backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(previous)


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
