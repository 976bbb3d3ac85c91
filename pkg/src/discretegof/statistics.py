"""Goodness-of-fit statistics for a count vector against a model distribution.

Every function accepts ``counts`` of shape ``(..., n)`` and ``probs``
broadcastable against it, so the same code scores a single experiment or a
whole block of simulated count vectors.  A scalar input pair returns a
Python float.

Terms of the form ``0 * ln 0`` are treated as 0.  A bin with zero model
probability but a positive count makes chi-square, G^2 and the negative
log-likelihood infinite; such an outcome is impossible under the model, so
it is more extreme than anything a simulation can produce.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import gammaln


class DimensionError(ValueError):
    """Count and probability vectors disagree in length."""


class StatisticKind(str, enum.Enum):
    RMS = "rms"
    CHI_SQUARE = "chi2"
    G_SQUARE = "g2"
    FREEMAN_TUKEY = "ft"
    NEG_LOG_LIKELIHOOD = "nll"

    @classmethod
    def parse(cls, value):
        """Accept an enum member, its value, or a few common spellings."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "rms": cls.RMS,
            "root_mean_square": cls.RMS,
            "chi2": cls.CHI_SQUARE,
            "chi_square": cls.CHI_SQUARE,
            "chisq": cls.CHI_SQUARE,
            "g2": cls.G_SQUARE,
            "g_square": cls.G_SQUARE,
            "g": cls.G_SQUARE,
            "ft": cls.FREEMAN_TUKEY,
            "freeman_tukey": cls.FREEMAN_TUKEY,
            "hellinger": cls.FREEMAN_TUKEY,
            "nll": cls.NEG_LOG_LIKELIHOOD,
            "neg_log_likelihood": cls.NEG_LOG_LIKELIHOOD,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown statistic {value!r}") from None


ALL_STATISTICS = tuple(StatisticKind)
CLASSICAL = (StatisticKind.CHI_SQUARE, StatisticKind.G_SQUARE, StatisticKind.FREEMAN_TUKEY)


def _prepare(counts, probs):
    c = np.asarray(counts, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    if c.ndim == 0 or p.ndim == 0:
        raise DimensionError("counts and probs must be at least one-dimensional")
    if c.shape[-1] != p.shape[-1]:
        raise DimensionError(
            f"counts have {c.shape[-1]} bins but probs have {p.shape[-1]}"
        )
    if c.shape[-1] < 2:
        raise DimensionError("at least two bins are required")
    m = c.sum(axis=-1, keepdims=True)
    if np.any(m <= 0):
        raise ValueError("total number of draws must be positive")
    return c, p, m


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _rms(c, p, m):
    q = c / m
    return np.sqrt(np.mean((q - p) ** 2, axis=-1))


def _chi_square(c, p, m):
    q = c / m
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = (q - p) ** 2 / p
    terms = np.where(p > 0, terms, np.where(q > 0, np.inf, 0.0))
    with np.errstate(over="ignore"):
        return m[..., 0] * terms.sum(axis=-1)


def _g_square(c, p, m):
    q = c / m
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = q * np.log(q / p)
    terms = np.where(q > 0, np.where(p > 0, terms, np.inf), 0.0)
    with np.errstate(over="ignore"):
        return 2.0 * m[..., 0] * terms.sum(axis=-1)


def _freeman_tukey(c, p, m):
    q = c / m
    return 4.0 * m[..., 0] * np.sum((np.sqrt(q) - np.sqrt(p)) ** 2, axis=-1)


def _neg_log_likelihood(c, p, m):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = c * np.log(p)
    terms = np.where(c > 0, np.where(p > 0, terms, -np.inf), 0.0)
    log_coeff = gammaln(m[..., 0] + 1.0) - gammaln(c + 1.0).sum(axis=-1)
    return -(log_coeff + terms.sum(axis=-1))


_IMPLS = {
    StatisticKind.RMS: _rms,
    StatisticKind.CHI_SQUARE: _chi_square,
    StatisticKind.G_SQUARE: _g_square,
    StatisticKind.FREEMAN_TUKEY: _freeman_tukey,
    StatisticKind.NEG_LOG_LIKELIHOOD: _neg_log_likelihood,
}


def rms(counts, probs):
    """Root-mean-square distance between observed fractions and ``probs``.

    Examples
    --------
    >>> rms([3, 1], [0.5, 0.5])
    0.25
    """
    return _out(_rms(*_prepare(counts, probs)))


def chi_square(counts, probs):
    """Pearson's chi-square, ``m * sum((q - p)**2 / p)``."""
    return _out(_chi_square(*_prepare(counts, probs)))


def g_square(counts, probs):
    """Log-likelihood-ratio statistic ``2m * sum(q * ln(q / p))``."""
    return _out(_g_square(*_prepare(counts, probs)))


def freeman_tukey(counts, probs):
    """Freeman-Tukey (Hellinger) statistic ``4m * sum((sqrt(q) - sqrt(p))**2)``."""
    return _out(_freeman_tukey(*_prepare(counts, probs)))


def neg_log_likelihood(counts, probs):
    """Negative log of the multinomial probability of ``counts`` under ``probs``.

    The multinomial coefficient ``m! / prod(c_k!)`` is included, so the value
    is the genuine negative log-probability of the observed count vector.
    """
    return _out(_neg_log_likelihood(*_prepare(counts, probs)))


def evaluate(kinds, counts, probs):
    """Compute several statistics at once; returns ``{kind: value}``."""
    prepared = _prepare(counts, probs)
    out = {}
    for kind in kinds:
        kind = StatisticKind.parse(kind)
        out[kind] = _out(_IMPLS[kind](*prepared))
    return out
