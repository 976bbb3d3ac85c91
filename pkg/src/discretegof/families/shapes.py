"""Fixed probability vectors and the fully specified family."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln, softmax

from discretegof.families.base import ModelFamily, Parameter, check_probability_vector


def power_law(n, s, offset=0):
    """``p_k`` proportional to ``1 / (k + offset)**s`` for ``k = 1..n``."""
    k = np.arange(1, n + 1, dtype=np.float64) + offset
    return softmax(-s * np.log(k))


def truncated_geometric(n, t):
    """``p_k`` proportional to ``t**k`` for ``k = 1..n``."""
    k = np.arange(1, n + 1, dtype=np.float64)
    return softmax(k * np.log(t))


def truncated_poisson(n, mean, shift=0.0):
    """Poisson probabilities of the values ``shift, shift+1, ..`` over ``n`` bins.

    Bin ``k`` (one-based) is proportional to
    ``mean**(k - 1 + shift) / Gamma(k + shift)``; non-integer shifts use the
    gamma function.
    """
    j = np.arange(n, dtype=np.float64) + shift
    return softmax(j * np.log(mean) - gammaln(j + 1.0))


def heavy_head(n, first=0.25, second=0.25):
    """Two heavy leading bins followed by a flat tail of ``n - 2`` bins."""
    if n < 3:
        raise ValueError("need at least three bins")
    tail = (1.0 - first - second) / (n - 2)
    return np.concatenate([[first, second], np.full(n - 2, tail)])


class FullySpecified(ModelFamily):
    """A single distribution; fitting is the identity."""

    param_kind = "none"
    param_spec = "no parameters"

    def __init__(self, probs, name="fixed"):
        p = check_probability_vector(probs)
        super().__init__(p.size)
        self.p = p / p.sum()
        self.p.setflags(write=False)
        self.name = name

    def _estimate(self, counts):
        b = counts.shape[0]
        return Parameter("none", np.empty((b, 0)), None, np.zeros(b, dtype=bool))

    def _probs(self, theta):
        return np.broadcast_to(self.p, (theta.values.shape[0], self.n))

    def fit_probs(self, counts):
        c = self._counts2d(counts)
        return np.broadcast_to(self.p, c.shape)

    def scored(self, counts):
        c = self._counts2d(counts)
        return c, np.broadcast_to(self.p, c.shape)

    def random_parameter(self, rng):
        return Parameter("none", np.empty(0))


def fully_specified(probs, name="fixed"):
    return FullySpecified(probs, name=name)


def uniform(n):
    return FullySpecified(np.full(n, 1.0 / n), name="uniform")
