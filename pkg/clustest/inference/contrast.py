from __future__ import annotations

import numpy as np

from ..errors import InvalidSubset, NeedTwoGroups


def contrast_A(d: int, g: int) -> np.ndarray:
    """Contrast matrix ``A_{d,G} = [(1_{G-1} kron I_d), -I_{d(G-1)}]`` of shape ``(d(G-1), dG)``.

    Applied to the stacked means ``[mu_0', ..., mu_{G-1}']'`` it returns the differences
    ``mu_0 - mu_g`` for ``g = 1..G-1``. It annihilates every vector of the form ``1_G kron v``.

    Examples:
        >>> from clustest.inference import contrast_A
        >>> contrast_A(1, 3)
        array([[ 1., -1.,  0.],
               [ 1.,  0., -1.]])
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if g < 2:
        raise NeedTwoGroups(f"contrasts need at least two groups, got {g}")
    left = np.kron(np.ones((g - 1, 1)), np.eye(d))
    return np.hstack([left, np.diag(np.full(d * (g - 1), -1.0))])


def contrast_B(g_prime: int, g: int) -> np.ndarray:
    """The first ``g_prime - 1`` rows of ``contrast_A(1, g)``, comparing only the ``g_prime`` largest groups."""
    if g_prime < 2:
        raise NeedTwoGroups(f"contrasts need at least two groups, got {g_prime}")
    if g_prime > g:
        raise InvalidSubset(f"cannot compare {g_prime} groups out of {g}")
    return contrast_A(1, g)[:g_prime - 1]
