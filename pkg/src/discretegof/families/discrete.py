"""Power-law, geometric and Poisson families, with optional bin sorting."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln, logsumexp, softmax

from discretegof.families.base import (
    ModelFamily,
    Parameter,
    from_ranks,
    rank_order,
)
from discretegof.optimize import golden_section_max

GEOMETRIC_BOUNDS = (1e-9, 1.0 - 1e-9)
EXPONENT_BOUNDS = (1e-6, 32.0)
POISSON_BOUNDS = (1e-12, 1e12)


def _rowdot(a, v):
    # elementwise row sums do not depend on how many rows are batched, unlike BLAS
    return (np.asarray(a) * v).sum(axis=-1)


def _sorted_counts(counts, permute):
    if not permute:
        return counts, None
    order, ranks = rank_order(counts)
    return np.take_along_axis(counts, order, axis=-1), ranks


def _kind(estimated, permute):
    if permute:
        return "composite" if estimated else "permutation"
    return "real" if estimated else "none"


class Zipf(ModelFamily):
    """Truncated power law ``p`` proportional to ``1 / (rank + offset)**s``.

    With ``permute=True`` the ordering of the bins is a parameter estimated
    by sorting the counts.  ``exponent=None`` estimates ``s`` by maximum
    likelihood on ``bounds``.
    """

    def __init__(self, n, exponent=None, permute=False, offset=0, bounds=EXPONENT_BOUNDS, tol=1e-10):
        super().__init__(n)
        if exponent is not None and exponent <= 0:
            raise ValueError("the power-law exponent must be positive")
        self.exponent = exponent
        self.permute = bool(permute)
        self.offset = int(offset)
        self.bounds = bounds
        self.tol = tol
        self.param_kind = _kind(exponent is None, self.permute)
        self._logk = np.log(np.arange(1, self.n + 1, dtype=np.float64) + self.offset)
        s = "free" if exponent is None else f"{exponent:g}"
        self.name = f"zipf:{s}" + (":perm" if self.permute else "")
        self.param_spec = f"exponent in {bounds}" if exponent is None else "exponent fixed"

    def _rank_probs(self, s):
        return softmax(-s[:, None] * self._logk[None, :], axis=-1)

    def _probs(self, theta):
        p = self._rank_probs(np.asarray(theta.values, dtype=np.float64)[:, 0])
        return from_ranks(p, theta.ranks)

    def _estimate(self, counts):
        cs, ranks = _sorted_counts(counts, self.permute)
        b = counts.shape[0]
        if self.exponent is not None:
            return Parameter(self.param_kind, np.full((b, 1), float(self.exponent)), ranks, np.zeros(b, bool))
        s1 = _rowdot(cs, self._logk)
        m = cs.sum(axis=-1)
        logk = self._logk

        def loglik(s):
            return -s * s1 - m * logsumexp(-s[:, None] * logk[None, :], axis=-1)

        lo, hi = self.bounds
        s, bnd, it = golden_section_max(loglik, np.full(b, lo), np.full(b, hi), tol=self.tol)
        return Parameter(self.param_kind, s[:, None], ranks, bnd), it

    def random_parameter(self, rng):
        s = self.exponent if self.exponent is not None else rng.uniform(0.05, 6.0)
        ranks = rng.permutation(self.n) if self.permute else None
        return Parameter(self.param_kind, np.array([s]), ranks)


class WeightedGeometric(ModelFamily):
    """``p`` proportional to ``t**rank * w(rank)`` with base ``t`` in (0, 1).

    ``w`` defaults to 1 (a truncated geometric distribution).  Passing
    ``offset`` uses ``w(r) = 1 / sqrt(r + offset)``.
    """

    def __init__(self, n, offset=None, permute=False, bounds=GEOMETRIC_BOUNDS, tol=1e-10, name=None):
        super().__init__(n)
        self.permute = bool(permute)
        self.offset = offset
        self.bounds = bounds
        self.tol = tol
        r = np.arange(1, self.n + 1, dtype=np.float64)
        self._r = r
        self._logw = np.zeros(self.n) if offset is None else -0.5 * np.log(r + offset)
        self.param_kind = _kind(True, self.permute)
        self.param_spec = f"base in {bounds}"
        self.name = name or "geom:trunc" + (":perm" if self.permute else "")

    def _rank_probs(self, t):
        return softmax(np.log(t)[:, None] * self._r[None, :] + self._logw[None, :], axis=-1)

    def _probs(self, theta):
        p = self._rank_probs(np.asarray(theta.values, dtype=np.float64)[:, 0])
        return from_ranks(p, theta.ranks)

    def _estimate(self, counts):
        cs, ranks = _sorted_counts(counts, self.permute)
        b = counts.shape[0]
        sr = _rowdot(cs, self._r)
        m = cs.sum(axis=-1)
        r, logw = self._r, self._logw

        def loglik(t):
            lt = np.log(t)
            return lt * sr - m * logsumexp(lt[:, None] * r[None, :] + logw[None, :], axis=-1)

        lo, hi = self.bounds
        t, bnd, it = golden_section_max(loglik, np.full(b, lo), np.full(b, hi), tol=self.tol)
        return Parameter(self.param_kind, t[:, None], ranks, bnd), it

    def random_parameter(self, rng):
        ranks = rng.permutation(self.n) if self.permute else None
        return Parameter(self.param_kind, np.array([rng.uniform(0.01, 0.99)]), ranks)


def butterfly_family(n, offset=23, permute=True):
    """Geometric law damped by ``1 / sqrt(rank + offset)``, bins sorted."""
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    return WeightedGeometric(n, offset=offset, permute=permute, name=f"butterfly:{offset}")


class RebinnedGeometric(ModelFamily):
    """Geometric law on bins ``1..n-1`` with bin ``n`` holding the whole tail.

    ``p_k = t**(k-1) * (1 - t)`` for ``k < n`` and ``p_n = t**(n-1)``.  The
    maximum-likelihood base has the closed form ``T / (T + W)``; the numeric
    route is kept for cross-checking.
    """

    name = "geom:rebinned"
    param_kind = "real"
    param_spec = "base in [0, 1]"

    def __init__(self, n, method="closed", tol=1e-10):
        super().__init__(n)
        if method not in ("closed", "numeric"):
            raise ValueError("method must be 'closed' or 'numeric'")
        self.method = method
        self.tol = tol
        k = np.arange(1, self.n + 1, dtype=np.float64)
        self._exp = k - 1.0  # power of t in each bin
        self._has_tail = np.ones(self.n)  # power of (1 - t)
        self._has_tail[-1] = 0.0

    def _probs(self, theta):
        t = np.asarray(theta.values, dtype=np.float64)[:, :1]
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.power(t, self._exp) * np.power(1.0 - t, self._has_tail)
        return p

    def sufficient(self, counts):
        """``(T, W)``: total exponent of ``t`` and of ``1 - t`` in the likelihood."""
        return _rowdot(counts, self._exp), _rowdot(counts, self._has_tail)

    def _estimate(self, counts):
        big_t, big_w = self.sufficient(counts)
        b = counts.shape[0]
        if self.method == "closed":
            t = big_t / (big_t + big_w)
            bnd = (t <= 0.0) | (t >= 1.0)
            return Parameter("real", t[:, None], None, bnd)

        def loglik(t):
            with np.errstate(divide="ignore"):
                return big_t * np.log(t) + big_w * np.log1p(-t)

        t, bnd, it = golden_section_max(loglik, np.zeros(b), np.ones(b), tol=self.tol)
        return Parameter("real", t[:, None], None, bnd), it

    def random_parameter(self, rng):
        return Parameter("real", np.array([rng.uniform(0.01, 0.99)]))


class TruncatedPoisson(ModelFamily):
    """Poisson law of the values ``0..n-1`` (bin ``k`` holds value ``k - 1``).

    The likelihood equation sets the truncated mean equal to the sample
    mean; it is solved by safeguarded Newton iteration in ``log(theta)``.
    Means at the edges (all draws in the first or the last bin) have no
    interior solution and are clamped to ``bounds`` with a boundary flag.
    """

    name = "poisson:trunc"
    param_kind = "real"

    def __init__(self, n, bounds=POISSON_BOUNDS, tol=1e-13, maxiter=200):
        super().__init__(n)
        self.bounds = bounds
        self.tol = tol
        self.maxiter = maxiter
        self._j = np.arange(self.n, dtype=np.float64)
        self._lgam = gammaln(self._j + 1.0)
        self.param_spec = f"mean parameter in {bounds}"

    def _logits(self, eta):
        return eta[:, None] * self._j[None, :] - self._lgam[None, :]

    def _probs(self, theta):
        lam = np.asarray(theta.values, dtype=np.float64)[:, 0]
        return softmax(self._logits(np.log(lam)), axis=-1)

    def truncated_mean(self, lam):
        p = softmax(self._logits(np.log(np.atleast_1d(lam))), axis=-1)
        return _rowdot(p, self._j)

    def _estimate(self, counts):
        m = counts.sum(axis=-1)
        xbar = _rowdot(counts, self._j) / m
        lo, hi = np.log(self.bounds[0]), np.log(self.bounds[1])
        at_lo = xbar <= 0.0
        at_hi = xbar >= self.n - 1
        interior = ~(at_lo | at_hi)
        eta = np.where(at_lo, lo, hi).astype(np.float64)
        it = 0
        if interior.any():
            target = xbar[interior]
            a = np.full(target.shape, lo)
            b = np.full(target.shape, hi)
            x = np.clip(np.log(np.maximum(target, 1e-300)), lo, hi)
            for it in range(1, self.maxiter + 1):
                p = softmax(self._logits(x), axis=-1)
                mean = _rowdot(p, self._j)
                var = _rowdot(p, self._j**2) - mean**2
                g = mean - target
                # the truncated mean increases with eta, so g keeps the bracket honest
                a = np.where(g < 0, x, a)
                b = np.where(g > 0, x, b)
                with np.errstate(divide="ignore", invalid="ignore"):
                    step = g / var
                nxt = x - step
                bad = ~np.isfinite(nxt) | (nxt <= a) | (nxt >= b)
                nxt = np.where(bad, 0.5 * (a + b), nxt)
                done = np.abs(nxt - x) <= self.tol * np.maximum(1.0, np.abs(x))
                x = nxt
                if done.all():
                    break
            eta[interior] = x
        bnd = ~interior
        return Parameter("real", np.exp(eta)[:, None], None, bnd), it

    def random_parameter(self, rng):
        return Parameter("real", np.array([rng.uniform(0.05, 2.0 * self.n)]))
