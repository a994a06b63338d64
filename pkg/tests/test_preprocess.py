import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from dfnet.preprocess import DegenerateCycleError, normalize_cycle

cycles = hnp.arrays(np.float64, st.integers(2, 8), elements=st.floats(1e-6, 1e6))


def test_examples():
    np.testing.assert_array_equal(normalize_cycle([1, 1, 1, 1]), [0.25] * 4)
    np.testing.assert_array_equal(normalize_cycle([2, 0, 0, 0]), [1, 0, 0, 0])


@pytest.mark.parametrize("bad", [[0, 0, 0, 0], [1, -1, 1, 1], [1, np.nan, 1, 1], [1, np.inf, 0, 0], []])
def test_degenerate(bad):
    with pytest.raises(DegenerateCycleError):
        normalize_cycle(bad)


@given(cycles)
def test_sums_to_one(p):
    x = normalize_cycle(p)
    assert abs(x.sum() - 1.0) < 1e-12
    assert np.all((x >= 0) & (x <= 1))


@given(cycles, st.floats(1e-3, 1e3))
def test_scale_invariance(p, c):
    np.testing.assert_allclose(normalize_cycle(c * p), normalize_cycle(p), rtol=1e-14, atol=0)


@given(cycles)
def test_idempotent(p):
    x = normalize_cycle(p)
    np.testing.assert_allclose(normalize_cycle(x), x, rtol=1e-15, atol=1e-17)


def test_batch_rows():
    x = normalize_cycle([[1, 1, 2], [3, 0, 1]])
    np.testing.assert_allclose(x, [[0.25, 0.25, 0.5], [0.75, 0, 0.25]])
