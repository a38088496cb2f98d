import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustest.enum import DistFamily
from clustest.errors import DomainError
from clustest.statfun import (HETEROGENEOUS_FAMILIES, DistSpec, chi2_cdf, chi2_quantile, chi2_sf, normal_cdf,
                              normal_sf, normal_two_sided, sample, sample_array, substream)


def test_chi2_cdf_values():
    assert chi2_cdf(0.0, 3) == 0.0
    assert chi2_cdf(3.8415, 1) == pytest.approx(0.95, abs=1e-4)
    assert 0.4 < chi2_cdf(10.0, 10) < 0.7
    assert chi2_cdf(9.0, 10) < chi2_cdf(10.0, 10) < chi2_cdf(11.0, 10)


def test_chi2_sf_tail():
    assert chi2_sf(64.0, 1) < 1e-14
    assert chi2_sf(64.0, 1) > 0.0
    assert chi2_sf(3.0, 2) == pytest.approx(1.0 - chi2_cdf(3.0, 2))


def test_chi2_quantile_values():
    assert chi2_quantile(0.95, 1) == pytest.approx(3.8415, abs=1e-3)
    assert chi2_quantile(0.5, 2) == pytest.approx(2.0 * math.log(2.0), abs=1e-10)


@pytest.mark.parametrize("k", [1, 2, 5, 30])
def test_chi2_quantile_round_trip(k):
    for p in np.linspace(0.01, 0.99, 99):
        assert chi2_cdf(chi2_quantile(p, k), k) == pytest.approx(p, abs=1e-10)


def test_chi2_domain_errors():
    with pytest.raises(DomainError):
        chi2_cdf(-1.0, 2)
    with pytest.raises(DomainError):
        chi2_cdf(1.0, 0)
    with pytest.raises(DomainError):
        chi2_quantile(1.0, 2)


def test_normal_values():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.96) == pytest.approx(0.9750, abs=1e-4)
    assert 0.0 < normal_sf(8.0) < 1e-14
    assert normal_two_sided(0.0) == 1.0
    assert normal_two_sided(-1.96) == pytest.approx(0.05, abs=1e-4)


@given(st.floats(min_value=-30.0, max_value=30.0))
def test_normal_symmetry(z):
    assert abs(normal_cdf(z) + normal_cdf(-z) - 1.0) < 1e-14


def test_substream_is_keyed():
    a = substream(42, 3, 7).standard_normal(5)
    b = substream(42, 3, 7).standard_normal(5)
    c = substream(42, 7, 3).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_standardized_uniform():
    x = sample_array(DistSpec(DistFamily.UNIFORM, (-3.0, 3.0)), substream(1, 0), 5)
    raw = substream(1, 0).uniform(-3.0, 3.0, 5)
    assert np.allclose(x, raw / math.sqrt(3.0))


def test_standardized_exponential():
    x = sample_array(DistSpec(DistFamily.EXPONENTIAL, (2.0,)), substream(1, 0), 5)
    raw = substream(1, 0).exponential(0.5, 5)
    assert np.allclose(x, (raw - 0.5) / 0.5)


@pytest.mark.parametrize("dist", HETEROGENEOUS_FAMILIES)
def test_standardized_moments(dist):
    x = sample_array(dist, substream(2024, 1), 1_000_000)
    assert abs(x.mean()) < 0.005
    assert abs(x.var() - 1.0) < 0.01


def test_sample_scalar():
    assert isinstance(sample(DistSpec(DistFamily.STD_NORMAL), substream(0)), float)


def test_dist_spec_validation():
    with pytest.raises(ValueError):
        DistSpec(DistFamily.UNIFORM, (1.0, 0.0))
    with pytest.raises(ValueError):
        DistSpec(DistFamily.STUDENT_T, (3.0,))
