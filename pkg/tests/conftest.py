import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_real = st.floats(-3, 3, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def complex_matrices(draw, n_min=1, n_max=6, square=True):
    n = draw(st.integers(n_min, n_max))
    m = n if square else draw(st.integers(n_min, n_max))
    re = draw(hnp.arrays(np.float64, (n, m), elements=_real))
    im = draw(hnp.arrays(np.float64, (n, m), elements=_real))
    return re + 1j * im


@st.composite
def hermitian_matrices(draw, n_min=1, n_max=6):
    a = draw(complex_matrices(n_min, n_max))
    return (a + a.conj().T) / 2
