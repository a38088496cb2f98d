from enum import Enum


class SplitMode(Enum):
    """Constants for determining how the time dimension is split into the ``R`` and ``P`` samples.

    Constants:
        ``HALVES``
            The first ``T // 2`` periods form ``R`` and the rest form ``P``.
            With a gap ``M``, the last ``M`` periods of the first half are dropped from ``R``.
        ``INTERLEAVED``
            Odd-numbered periods (1st, 3rd, ...) form ``R`` and even-numbered periods form ``P``.
    """
    HALVES = 0
    INTERLEAVED = 1

    @staticmethod
    def from_string(s: str) -> "SplitMode":
        """Convert a string to a split mode."""
        s = s.strip().lower()
        if s == 'halves':
            return SplitMode.HALVES
        elif s == 'interleaved':
            return SplitMode.INTERLEAVED
        else:
            raise ValueError(f"Unknown split mode: {s}")


class TestMethod(Enum):
    """Constants identifying the test statistic behind a ``TestResult``.

    Constants:
        ``F_TEST``
            Chi-square test on the contrasts of all group means.
        ``T_TEST``
            Two-group t-test (``d = 1``, ``G = 2``).
        ``PARAM_TEST``
            Chi-square test on clustered parameter estimates.
        ``SMALL_CLUSTER``
            Chi-square test restricted to the clusters with proportion at least ``pi_bar``.
        ``FINITE_T``
            Test built on group-mean residuals, valid for a fixed number of periods.
        ``HAC``
            Two-group t-test with a variance robust to ``M``-dependent errors.
        ``NO_SPLIT``
            Fit and test on the same sample. Invalid, kept as a negative control.
        ``BONFERRONI``
            Bonferroni combination of tests over a range of group counts.
    """
    __test__ = False

    F_TEST = 0
    T_TEST = 1
    PARAM_TEST = 2
    SMALL_CLUSTER = 3
    FINITE_T = 4
    HAC = 5
    NO_SPLIT = 6
    BONFERRONI = 7

    @staticmethod
    def from_string(s: str) -> "TestMethod":
        """Convert a string (e.g. ``'f'``, ``'small-cluster'``, ``'param-ar1'``) to a test method."""
        key = s.strip().lower().replace('_', '-')
        if key not in _METHOD_NAMES:
            raise ValueError(f"Unknown test method: {s}")
        return _METHOD_NAMES[key]

    @property
    def label(self) -> str:
        return _METHOD_LABELS[self]


_METHOD_NAMES = {
    'f': TestMethod.F_TEST,
    'f-test': TestMethod.F_TEST,
    't': TestMethod.T_TEST,
    't-test': TestMethod.T_TEST,
    'param': TestMethod.PARAM_TEST,
    'param-ar1': TestMethod.PARAM_TEST,
    'small-cluster': TestMethod.SMALL_CLUSTER,
    'finite-t': TestMethod.FINITE_T,
    'hac': TestMethod.HAC,
    'no-split': TestMethod.NO_SPLIT,
    'bonferroni': TestMethod.BONFERRONI,
    'bonf': TestMethod.BONFERRONI,
}

_METHOD_LABELS = {
    TestMethod.F_TEST: 'f',
    TestMethod.T_TEST: 't',
    TestMethod.PARAM_TEST: 'param-ar1',
    TestMethod.SMALL_CLUSTER: 'small-cluster',
    TestMethod.FINITE_T: 'finite-t',
    TestMethod.HAC: 'hac',
    TestMethod.NO_SPLIT: 'no-split',
    TestMethod.BONFERRONI: 'bonferroni',
}


class DistFamily(Enum):
    """Residual distribution families used by the heterogeneous data generating process."""
    STD_NORMAL = 0
    EXPONENTIAL = 1
    UNIFORM = 2
    CHI_SQUARED = 3
    STUDENT_T = 4

    @staticmethod
    def from_string(s: str) -> "DistFamily":
        """Convert a string to a distribution family."""
        s = s.strip().lower()
        if s in ('normal', 'std_normal', 'stdnormal'):
            return DistFamily.STD_NORMAL
        elif s in ('exponential', 'exp'):
            return DistFamily.EXPONENTIAL
        elif s in ('uniform', 'unif'):
            return DistFamily.UNIFORM
        elif s in ('chi_squared', 'chi2', 'chisquared'):
            return DistFamily.CHI_SQUARED
        elif s in ('student_t', 't', 'studentt'):
            return DistFamily.STUDENT_T
        else:
            raise ValueError(f"Unknown distribution family: {s}")


class DGPKind(Enum):
    """Data generating processes of the Monte Carlo lab.

    Constants:
        ``NULL_MEANS``
            All units share the mean zero.
        ``CLUSTER_MEANS``
            Units are assigned in blocks to groups with distinct mean vectors.
        ``AR1_CLUSTERS``
            Units follow zero-intercept AR(1) processes whose slope depends on the group.
    """
    NULL_MEANS = 'null_means'
    CLUSTER_MEANS = 'cluster_means'
    AR1_CLUSTERS = 'ar1_clusters'


class ResidualType(Enum):
    """Residual distributions of the Monte Carlo lab.

    Constants:
        ``NORMAL``
            Standard normal residuals for every unit.
        ``HETEROGENEOUS``
            Each unit draws one of five standardized families and keeps it across periods.
    """
    NORMAL = 'normal'
    HETEROGENEOUS = 'heterogeneous'


class SweepParameter(Enum):
    """Parameters that a power curve can sweep over."""
    MU2 = 'mu2'
    G_ALT = 'g_alt'
    PI3 = 'pi3'
    PHI2 = 'phi2'
    T_PERIODS = 't_periods'
