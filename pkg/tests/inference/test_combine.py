import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustest import KMeansOptions, TestMethod
from clustest.errors import InvalidPValue, NeedTwoGroups
from clustest.inference import bonferroni, bonferroni_test, f_test


@pytest.mark.parametrize("p_values, expected", [
    ([0.01, 0.5, 0.9, 0.2], 0.04),
    ([1.0, 1.0, 1.0], 1.0),
    ([0.4, 0.4], 0.8),
])
def test_bonferroni(p_values, expected):
    assert bonferroni(p_values) == pytest.approx(expected)


@pytest.mark.parametrize("p_values", [[], [0.5, 1.5], [float('nan')], [-0.1]])
def test_bonferroni_invalid(p_values):
    with pytest.raises(InvalidPValue):
        bonferroni(p_values)


@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=8))
def test_bonferroni_bounds(p_values):
    combined = bonferroni(p_values)
    assert min(p_values) <= combined <= 1.0


def test_bonferroni_test(random_panel):
    panel = random_panel(n=40, t=10, seed=6)
    opts = KMeansOptions(restarts=5, seed=2)
    result = bonferroni_test(panel, 'halves', 4, opts)
    components = {g: f_test(panel, 'halves', g, opts).p_value for g in (2, 3, 4)}
    assert result.method == TestMethod.BONFERRONI
    assert result.g_alt == 4
    assert result.diagnostics.p_values == pytest.approx(components)
    assert result.p_value == pytest.approx(min(1.0, 3 * min(components.values())))
    assert result.g_effective == min(components, key=components.get)


def test_bonferroni_test_needs_two_groups(worked_panel):
    with pytest.raises(NeedTwoGroups):
        bonferroni_test(worked_panel, 'halves', 1)
