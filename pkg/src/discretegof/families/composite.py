"""Models that fit the most frequent bins exactly and a family to the rest."""

from __future__ import annotations

import numpy as np

from discretegof.families.base import FitError, ModelFamily, Parameter, from_ranks, rank_order


class HeadFitted(ModelFamily):
    """Free probabilities for the ``head_size`` largest bins, a tail family after.

    The head parameters are set to the observed relative frequencies of the
    top bins (after sorting when ``permute``), so those bins agree with the
    data exactly.  ``tail`` is a family over the remaining ``n - head_size``
    ranks; it is fitted to the remaining counts and scaled by the mass the
    head leaves over.

    When ``rebin_at = r`` is given, statistics are computed in rank order on
    ``r`` bins with bin ``r`` collecting every rank ``>= r``.  Fitting and
    sampling always use all ``n`` bins.
    """

    def __init__(self, tail, head_size, permute=True, rebin_at=None, name=None):
        head_size = int(head_size)
        if head_size < 0:
            raise ValueError("head_size must be nonnegative")
        if getattr(tail, "permute", False):
            raise ValueError("the tail family must not sort its own bins; sorting happens on the whole model")
        super().__init__(tail.n + head_size)
        self.tail = tail
        self.head_size = head_size
        self.permute = bool(permute)
        if rebin_at is not None and not 2 <= int(rebin_at) <= self.n:
            raise ValueError(f"rebin_at must lie in 2..{self.n}")
        self.rebin_at = None if rebin_at is None else int(rebin_at)
        self.param_kind = "composite" if self.permute else "real"
        self.param_spec = f"{head_size} head probabilities + tail ({tail.param_spec})"
        suffix = "" if self.rebin_at is None else f":rebin={self.rebin_at}"
        self.name = name or f"head:{head_size}:{tail.name}{suffix}"

    def _split(self, counts):
        if self.permute:
            order, ranks = rank_order(counts)
            cs = np.take_along_axis(counts, order, axis=-1)
        else:
            cs, ranks = counts, None
        return cs, ranks

    def _estimate_sorted(self, cs):
        h = self.head_size
        m = cs.sum(axis=-1, keepdims=True)
        head = cs[:, :h] / m
        tail_counts = cs[:, h:]
        if np.any(tail_counts.sum(axis=-1) <= 0):
            raise FitError(
                f"{self.name}: no draws fall outside the {h} head bins; the tail fit is degenerate"
            )
        tail_theta, it = self.tail._run_estimate(tail_counts)
        values = np.concatenate([head, np.asarray(tail_theta.values, dtype=np.float64)], axis=-1)
        return values, tail_theta, it

    def _estimate(self, counts):
        cs, ranks = self._split(counts)
        values, tail_theta, it = self._estimate_sorted(cs)
        bnd = np.asarray(tail_theta.at_boundary, dtype=bool)
        return Parameter(self.param_kind, values, ranks, bnd), it

    def _rank_probs(self, values):
        h = self.head_size
        head = values[:, :h]
        tail_theta = Parameter(self.tail.param_kind, values[:, h:])
        tail = self.tail._probs(tail_theta)
        rest = 1.0 - head.sum(axis=-1, keepdims=True)
        return np.concatenate([head, tail * rest], axis=-1)

    def _probs(self, theta):
        p = self._rank_probs(np.asarray(theta.values, dtype=np.float64))
        return from_ranks(p, theta.ranks)

    def rebin(self, rank_space):
        """Collapse ranks ``>= rebin_at`` into the last bin."""
        r = self.rebin_at
        if r is None:
            return rank_space
        return np.concatenate(
            [rank_space[..., : r - 1], rank_space[..., r - 1 :].sum(axis=-1, keepdims=True)], axis=-1
        )

    def scored(self, counts):
        c = self._counts2d(counts)
        cs, _ = self._split(c)
        values, _, _ = self._estimate_sorted(cs)
        p = self._rank_probs(values)
        return self.rebin(cs), self.rebin(p)

    def random_parameter(self, rng):
        h = self.head_size
        head = rng.dirichlet(np.ones(h + 1))[:h] if h else np.empty(0)
        tail = self.tail.random_parameter(rng)
        ranks = rng.permutation(self.n) if self.permute else None
        return Parameter(self.param_kind, np.concatenate([head, np.asarray(tail.values, dtype=float)]), ranks)


def head_fitted_family(tail, head_size, permute=True, rebin_at=None):
    return HeadFitted(tail, head_size, permute=permute, rebin_at=rebin_at)
