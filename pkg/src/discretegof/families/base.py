"""Common machinery for parameterized discrete model families."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from discretegof.rng import sample_counts

PROB_TOL = 1e-9


class FitError(ValueError):
    """Maximum-likelihood fitting is undefined for the given counts."""


@dataclass(frozen=True)
class Parameter:
    """A (possibly batched) parameter value of a model family.

    ``kind`` is one of ``"none"``, ``"real"``, ``"integer"``,
    ``"permutation"`` or ``"composite"`` (a permutation plus reals).
    ``values`` holds the real or integer components with shape ``(d,)``,
    or ``(B, d)`` for a batch.  ``ranks`` holds, for every bin, its
    zero-based rank in the model ordering (so the one-based permutation is
    ``ranks + 1``).  ``at_boundary`` marks estimates clamped to the edge of
    the parameter space.
    """

    kind: str
    values: np.ndarray
    ranks: np.ndarray | None = None
    at_boundary: np.ndarray | bool = False

    @property
    def batched(self):
        return np.ndim(self.values) == 2

    @property
    def permutation(self):
        return None if self.ranks is None else self.ranks + 1

    def row(self, i):
        ranks = None if self.ranks is None else self.ranks[i]
        bnd = self.at_boundary
        bnd = bool(bnd[i]) if np.ndim(bnd) else bool(bnd)
        return Parameter(self.kind, self.values[i], ranks, bnd)

    def as_batch(self):
        if self.batched:
            return self
        ranks = None if self.ranks is None else np.asarray(self.ranks)[None, :]
        return Parameter(
            self.kind,
            np.asarray(self.values, dtype=np.float64)[None, :],
            ranks,
            np.atleast_1d(np.asarray(self.at_boundary, dtype=bool)),
        )

    def to_dict(self):
        out = {"kind": self.kind, "values": np.asarray(self.values).tolist()}
        if self.ranks is not None:
            out["permutation"] = self.permutation.tolist()
        out["at_boundary"] = np.asarray(self.at_boundary).tolist()
        return out


@dataclass(frozen=True)
class FitResult:
    parameter: Parameter
    log_likelihood: float
    iterations: int = 0

    @property
    def at_boundary(self):
        return bool(self.parameter.at_boundary)


def rank_order(counts):
    """Bins ordered by nonincreasing count, ties by ascending bin index.

    Returns ``(order, ranks)`` where ``order[..., r]`` is the bin holding
    rank ``r`` and ``ranks[..., k]`` is the rank of bin ``k``.
    """
    c = np.asarray(counts)
    order = np.argsort(-c, axis=-1, kind="stable")
    ranks = np.argsort(order, axis=-1, kind="stable")
    return order, ranks


def from_ranks(rank_probs, ranks):
    """Map rank-space probabilities to bins: ``p[k] = rank_probs[ranks[k]]``."""
    if ranks is None:
        return rank_probs
    rank_probs = np.broadcast_to(rank_probs, ranks.shape)
    return np.take_along_axis(rank_probs, ranks, axis=-1)


def log_likelihood(counts, probs):
    """``sum(c_k ln p_k)`` over the last axis, with ``0 ln 0 = 0``."""
    c = np.asarray(counts, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = c * np.log(p)
    terms = np.where(c > 0, terms, 0.0)
    return terms.sum(axis=-1)


def check_probability_vector(p, n=None):
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("a probability vector must be one-dimensional")
    if n is not None and p.size != n:
        raise ValueError(f"expected {n} probabilities, got {p.size}")
    if p.size < 2:
        raise ValueError("a probability vector needs at least two bins")
    if not np.isfinite(p).all() or np.any(p < 0):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


class ModelFamily(ABC):
    """A family ``p(theta)`` of distributions over ``n`` bins.

    Subclasses implement two batched primitives: ``_estimate`` (counts of
    shape ``(B, n)`` to a batched :class:`Parameter`) and ``_probs`` (batched
    parameter to probabilities of shape ``(B, n)``).  Everything else is
    derived here.
    """

    name = "family"
    param_kind = "real"
    param_spec = ""

    def __init__(self, n):
        n = int(n)
        if n < 2:
            raise ValueError("a model family needs at least two bins")
        self.n = n

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r} n={self.n}>"

    @abstractmethod
    def _estimate(self, counts):
        """Batched maximum-likelihood estimate.

        Returns a batched :class:`Parameter`, or ``(parameter, iterations)``
        for iterative fits.
        """

    @abstractmethod
    def _probs(self, theta):
        """Batched probabilities for a batched parameter."""

    @abstractmethod
    def random_parameter(self, rng):
        """A random valid (unbatched) parameter, for property checks."""

    def _counts2d(self, counts):
        c = np.asarray(counts)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[-1] != self.n:
            raise ValueError(
                f"{self.name}: expected counts over {self.n} bins, got shape {np.shape(counts)}"
            )
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        if np.any(c.sum(axis=-1) <= 0):
            raise FitError("cannot fit a model to zero draws")
        return c.astype(np.float64)

    def probs(self, theta):
        """Probabilities at ``theta`` (unbatched gives ``(n,)``)."""
        if theta.batched:
            return self._probs(theta)
        return self._probs(theta.as_batch())[0]

    def _run_estimate(self, c):
        out = self._estimate(c)
        return out if isinstance(out, tuple) else (out, 0)

    def estimate(self, counts):
        """Batched estimate for counts of shape ``(B, n)``."""
        return self._run_estimate(self._counts2d(counts))[0]

    def fit(self, counts):
        counts = np.asarray(counts)
        if counts.ndim != 1:
            raise ValueError("fit expects a single count vector; use estimate for batches")
        theta, iterations = self._run_estimate(self._counts2d(counts))
        theta = theta.row(0)
        ll = float(log_likelihood(counts, self.probs(theta)))
        return FitResult(theta, ll, iterations)

    def fit_probs(self, counts):
        """Fitted probabilities for a batch of count vectors."""
        return self._probs(self.estimate(counts))

    def scored(self, counts):
        """Count and model vectors on which statistics are evaluated.

        The default scores the raw bins against the fitted model; families
        that rebin for scoring override this.
        """
        c = self._counts2d(counts)
        return c, self._probs(self._run_estimate(c)[0])

    def log_likelihood(self, counts, theta):
        return float(log_likelihood(counts, self.probs(theta)))

    def sample(self, theta, m, rng, size=None):
        return sample_counts(self.probs(theta), m, rng, size=size)


def sample(family, theta, m, rng, size=None):
    """``m`` i.i.d. draws from ``family`` at ``theta``, as counts."""
    return family.sample(theta, m, rng, size=size)
