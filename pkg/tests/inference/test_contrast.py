import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustest.errors import InvalidSubset, NeedTwoGroups, SingularContrastVariance
from clustest.inference import VarianceEstimate, contrast_A, contrast_B, contrast_quadratic_form


def test_contrast_A_examples():
    assert np.array_equal(contrast_A(1, 2), np.array([[1.0, -1.0]]))
    assert np.array_equal(contrast_A(2, 2), np.array([[1, 0, -1, 0], [0, 1, 0, -1]], dtype=float))
    assert np.array_equal(contrast_A(1, 3), np.array([[1, -1, 0], [1, 0, -1]], dtype=float))


def test_contrast_B_examples():
    assert np.array_equal(contrast_B(2, 3), np.array([[1.0, -1.0, 0.0]]))
    assert np.array_equal(contrast_B(3, 3), contrast_A(1, 3))
    assert np.array_equal(contrast_B(2, 5), np.array([[1.0, -1.0, 0.0, 0.0, 0.0]]))


def test_contrast_errors():
    with pytest.raises(NeedTwoGroups):
        contrast_A(1, 1)
    with pytest.raises(NeedTwoGroups):
        contrast_B(1, 3)
    with pytest.raises(InvalidSubset):
        contrast_B(4, 3)


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=2, max_value=6),
       st.lists(st.floats(min_value=-100, max_value=100), min_size=4, max_size=4))
def test_contrast_A_annihilates_common_means(d, g, v):
    a = contrast_A(d, g)
    assert a.shape == (d * (g - 1), d * g)
    assert np.linalg.matrix_rank(a) == d * (g - 1)
    common = np.tile(np.asarray(v[:d]), g)
    assert np.allclose(a @ common, 0.0, atol=1e-9)


@settings(max_examples=50)
@given(st.integers(min_value=2, max_value=5), st.integers(min_value=0, max_value=2 ** 32),
       st.floats(min_value=-10, max_value=10))
def test_quadratic_form_ignores_common_shift(g, seed, shift):
    rng = np.random.default_rng(seed)
    means = rng.standard_normal((g, 1))
    omega = VarianceEstimate(tuple(np.array([[v]]) for v in rng.uniform(0.5, 2.0, g)))
    a = contrast_A(1, g)
    assert contrast_quadratic_form(a, means + shift, omega) == pytest.approx(
        contrast_quadratic_form(a, means, omega), rel=1e-8, abs=1e-10)


def test_quadratic_form_two_groups():
    omega = VarianceEstimate((np.array([[1.0]]), np.array([[1.0]])))
    assert contrast_quadratic_form(contrast_A(1, 2), np.array([[2.0], [6.0]]), omega) == pytest.approx(8.0)


def test_quadratic_form_singular():
    # no variance in the second coordinate
    omega = VarianceEstimate((np.diag([1.0, 0.0]), np.diag([1.0, 0.0])))
    with pytest.raises(SingularContrastVariance):
        contrast_quadratic_form(contrast_A(2, 2), np.zeros((2, 2)), omega)
