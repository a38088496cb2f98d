"""Exceptions raised by clustest.

Every exception carries a ``code`` used by the command-line interface to print a single
machine-parsable line such as ``error[singular_variance]: ...``.
"""


class ClusterTestError(Exception):
    """Base class of all errors raised by clustest."""
    code = 'error'


class DataError(ClusterTestError, ValueError):
    """Base class of errors caused by invalid input data or arguments."""
    code = 'data_error'


# panel data

class DuplicateCell(DataError):
    code = 'duplicate_cell'


class MalformedRow(DataError):
    code = 'malformed_row'


class IncompletePanel(DataError):
    code = 'incomplete_panel'


class NonFiniteValue(DataError):
    code = 'non_finite_value'


class PanelTooShort(DataError):
    code = 'panel_too_short'


class InsufficientUnits(DataError):
    code = 'insufficient_units'


class InvalidSplit(DataError):
    code = 'invalid_split'


class DegenerateAttribute(DataError):
    code = 'degenerate_attribute'


# clustering

class TooFewDistinctPoints(DataError):
    code = 'too_few_distinct_points'


# inference

class NeedTwoGroups(DataError):
    code = 'need_two_groups'


class InvalidSubset(DataError):
    code = 'invalid_subset'


class DimensionMismatch(DataError):
    code = 'dimension_mismatch'


class EmptyGroupInP(DataError):
    code = 'empty_group_in_p'


class SingularVariance(DataError):
    code = 'singular_variance'


class SingularContrastVariance(DataError):
    code = 'singular_contrast_variance'


class TooFewLargeClusters(DataError):
    code = 'too_few_large_clusters'


class InsufficientPSample(DataError):
    code = 'insufficient_p_sample'


class DegenerateRegressor(DataError):
    code = 'degenerate_regressor'


class InvalidPValue(DataError):
    code = 'invalid_p_value'


# special functions and simulation

class DomainError(DataError):
    code = 'domain_error'


class InvalidConfig(DataError):
    code = 'invalid_config'
