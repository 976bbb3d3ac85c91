"""Small hand-built families with closed-form or exhaustive fits."""

from __future__ import annotations

import numpy as np

from discretegof.families.base import (
    ModelFamily,
    Parameter,
    check_probability_vector,
    from_ranks,
    rank_order,
)
from discretegof.optimize import golden_section_max


def _check_method(method):
    if method not in ("closed", "numeric"):
        raise ValueError("method must be 'closed' or 'numeric'")
    return method


class TwoPoint(ModelFamily):
    """``(theta, 1/2 - theta)`` on bins 1-2, flat ``1/(2n-4)`` elsewhere.

    MLE: ``theta = c1 / (2 (c1 + c2))``.
    """

    name = "two-point"
    param_spec = "theta in [0, 1/2]"

    def __init__(self, n, method="closed", tol=1e-12):
        if n < 3:
            raise ValueError("need at least three bins")
        super().__init__(n)
        self.method = _check_method(method)
        self.tol = tol

    def _probs(self, theta):
        t = np.asarray(theta.values, dtype=np.float64)[:, 0]
        p = np.full((t.size, self.n), 1.0 / (2 * self.n - 4))
        p[:, 0] = t
        p[:, 1] = 0.5 - t
        return p

    def _estimate(self, counts):
        c1, c2 = counts[:, 0], counts[:, 1]
        head = c1 + c2
        if self.method == "numeric":
            def loglik(t):
                with np.errstate(divide="ignore", invalid="ignore"):
                    return np.where(c1 > 0, c1 * np.log(t), 0.0) + np.where(c2 > 0, c2 * np.log(0.5 - t), 0.0)
            b = counts.shape[0]
            t, bnd, it = golden_section_max(loglik, np.zeros(b), np.full(b, 0.5), tol=self.tol)
            return Parameter("real", t[:, None], None, bnd | (head == 0)), it
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(head > 0, c1 / (2.0 * head), 0.25)
        t = np.clip(t, 0.0, 0.5)
        bnd = (head == 0) | (t <= 0.0) | (t >= 0.5)
        return Parameter("real", t[:, None], None, bnd)

    def random_parameter(self, rng):
        return Parameter("real", np.array([rng.uniform(0.0, 0.5)]))


class ThreePoint(ModelFamily):
    """``(theta, theta, 1/2 - 2 theta)`` on bins 1-3, flat ``1/(2n-6)`` elsewhere.

    Grouping bins 1 and 2 gives a multinomial in ``2 theta``, so the MLE is
    ``theta = (c1 + c2) / (4 (c1 + c2 + c3))``.
    """

    name = "three-point"
    param_spec = "theta in [0, 1/4]"

    def __init__(self, n, method="closed", tol=1e-12):
        if n < 4:
            raise ValueError("need at least four bins")
        super().__init__(n)
        self.method = _check_method(method)
        self.tol = tol

    def _probs(self, theta):
        t = np.asarray(theta.values, dtype=np.float64)[:, 0]
        p = np.full((t.size, self.n), 1.0 / (2 * self.n - 6))
        p[:, 0] = t
        p[:, 1] = t
        p[:, 2] = 0.5 - 2.0 * t
        return p

    def _estimate(self, counts):
        a = counts[:, 0] + counts[:, 1]
        c3 = counts[:, 2]
        head = a + c3
        if self.method == "numeric":
            def loglik(t):
                with np.errstate(divide="ignore", invalid="ignore"):
                    return np.where(a > 0, a * np.log(t), 0.0) + np.where(c3 > 0, c3 * np.log(0.5 - 2 * t), 0.0)
            b = counts.shape[0]
            t, bnd, it = golden_section_max(loglik, np.zeros(b), np.full(b, 0.25), tol=self.tol)
            return Parameter("real", t[:, None], None, bnd | (head == 0)), it
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(head > 0, a / (4.0 * head), 0.125)
        t = np.clip(t, 0.0, 0.25)
        bnd = (head == 0) | (t <= 0.0) | (t >= 0.25)
        return Parameter("real", t[:, None], None, bnd)

    def random_parameter(self, rng):
        return Parameter("real", np.array([rng.uniform(0.0, 0.25)]))


class IntegerSplit(ModelFamily):
    """Flat mass 1/2 on bins ``1..theta`` and 1/2 on ``theta+1..n``.

    ``theta`` ranges over ``1..n-1`` and is found by exhaustive search;
    ties go to the smallest ``theta``.
    """

    name = "split"
    param_kind = "integer"

    def __init__(self, n):
        super().__init__(n)
        self.param_spec = f"integer theta in 1..{self.n - 1}"
        self._thetas = np.arange(1, self.n, dtype=np.float64)

    def _probs(self, theta):
        t = np.asarray(theta.values)[:, 0].astype(np.int64)
        k = np.arange(1, self.n + 1)
        left = k[None, :] <= t[:, None]
        return np.where(left, 1.0 / (2.0 * t[:, None]), 1.0 / (2.0 * (self.n - t[:, None])))

    def log_likelihoods(self, counts):
        """Log-likelihood at every ``theta = 1..n-1``, shape ``(B, n-1)``."""
        c = np.asarray(counts, dtype=np.float64)
        c = c[None, :] if c.ndim == 1 else c
        left = np.cumsum(c, axis=-1)[:, :-1]
        m = c.sum(axis=-1, keepdims=True)
        th = self._thetas[None, :]
        return -left * np.log(2.0 * th) - (m - left) * np.log(2.0 * (self.n - th))

    def _estimate(self, counts):
        ll = self.log_likelihoods(counts)
        t = np.argmax(ll, axis=-1) + 1
        bnd = (t == 1) | (t == self.n - 1)
        return Parameter("integer", t[:, None].astype(np.float64), None, bnd)

    def random_parameter(self, rng):
        return Parameter("integer", np.array([float(rng.integers(1, self.n))]))


class Paired(ModelFamily):
    """``theta1`` on bins 1-2, ``theta2`` on bins 3-4, the rest flat.

    MLE: ``theta1 = (q1 + q2) / 2`` and ``theta2 = (q3 + q4) / 2``.
    """

    name = "paired"
    param_spec = "theta1, theta2 >= 0 with 2 theta1 + 2 theta2 <= 1"

    def __init__(self, n, method="closed", tol=1e-12):
        if n < 5:
            raise ValueError("need at least five bins")
        super().__init__(n)
        self.method = _check_method(method)
        self.tol = tol

    def _probs(self, theta):
        v = np.asarray(theta.values, dtype=np.float64)
        t1, t2 = v[:, 0], v[:, 1]
        p = np.empty((v.shape[0], self.n))
        p[:, 0:2] = t1[:, None]
        p[:, 2:4] = t2[:, None]
        p[:, 4:] = ((1.0 - 2.0 * t1 - 2.0 * t2) / (self.n - 4))[:, None]
        return np.maximum(p, 0.0)

    def _estimate(self, counts):
        m = counts.sum(axis=-1)
        a = counts[:, 0] + counts[:, 1]
        b = counts[:, 2] + counts[:, 3]
        rest = m - a - b
        if self.method == "numeric":
            # profile out theta2: for fixed group mass x = 2 theta1 the best
            # 2 theta2 is b (1 - x) / (b + rest)
            def loglik(x):
                with np.errstate(divide="ignore", invalid="ignore"):
                    return np.where(a > 0, a * np.log(x), 0.0) + np.where(b + rest > 0, (b + rest) * np.log1p(-x), 0.0)
            nb = counts.shape[0]
            x, bnd, it = golden_section_max(loglik, np.zeros(nb), np.ones(nb), tol=self.tol)
            with np.errstate(divide="ignore", invalid="ignore"):
                y = np.where(b + rest > 0, b * (1.0 - x) / (b + rest), 0.0)
            values = np.stack([x / 2.0, y / 2.0], axis=-1)
            return Parameter("real", values, None, bnd), it
        values = np.stack([a / (2.0 * m), b / (2.0 * m)], axis=-1)
        bnd = (a == 0) | (b == 0) | (rest == 0)
        return Parameter("real", values, None, bnd)

    def random_parameter(self, rng):
        w = rng.dirichlet(np.ones(3))
        return Parameter("real", np.array([w[0] / 2.0, w[1] / 2.0]))


class Permuted(ModelFamily):
    """A fixed nonincreasing distribution over ranks, bin order unknown.

    The maximum-likelihood ordering assigns the largest count to the most
    probable rank, which is exactly sorting the counts.
    """

    param_kind = "permutation"
    param_spec = "permutation of the bins"

    def __init__(self, rank_probs, name="perm"):
        p = check_probability_vector(rank_probs)
        if np.any(np.diff(p) > 1e-15):
            raise ValueError("rank probabilities must be nonincreasing")
        super().__init__(p.size)
        self.rank_probs = p / p.sum()
        self.name = name

    def _probs(self, theta):
        return from_ranks(self.rank_probs[None, :], np.asarray(theta.ranks))

    def _estimate(self, counts):
        _, ranks = rank_order(counts)
        b = counts.shape[0]
        return Parameter("permutation", np.empty((b, 0)), ranks, np.zeros(b, bool))

    def random_parameter(self, rng):
        return Parameter("permutation", np.empty(0), rng.permutation(self.n))


def step_permuted(n, first=3 / 8, second=1 / 8):
    """Permutation family with two heavy ranks and a flat tail."""
    if n < 3:
        raise ValueError("need at least three bins")
    tail = (1.0 - first - second) / (n - 2)
    probs = np.concatenate([[first, second], np.full(n - 2, tail)])
    return Permuted(probs, name="perm-step")
