"""Seedable random streams and multinomial count sampling.

Each stream is identified by a master seed plus a tuple of integers (for
example a simulation-block index).  Streams are derived with numpy's
``SeedSequence`` spawn keys and drive a PCG64 generator (period 2**128), so
a stream's output depends only on its identity and never on the order in
which streams are consumed or on how many threads consume them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

THREADS_ENV = "DISCRETEGOF_THREADS"


def default_workers():
    """Thread count from ``$DISCRETEGOF_THREADS``, defaulting to 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_index: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        index = self.stream_index
        if isinstance(index, (int, np.integer)):
            index = (int(index),)
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "stream_index", tuple(int(i) for i in index))

    def child(self, *index):
        return RngStream(self.master_seed, self.stream_index + tuple(index))

    def generator(self):
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_index)
        return np.random.Generator(np.random.PCG64(seq))


def as_stream(seed):
    if isinstance(seed, RngStream):
        return seed
    return RngStream(int(seed))


def sample_counts(probs, m, rng, size=None):
    """Multinomial counts of ``m`` draws from ``probs``.

    ``size=None`` returns one count vector; an integer returns a
    ``(size, n)`` array.  Few draws over many bins are generated one draw at
    a time via the inverse CDF; otherwise numpy's conditional-binomial
    multinomial sampler is used.  The choice depends only on ``(m, n)``.
    """
    p = np.asarray(probs, dtype=np.float64)
    m = int(m)
    if m < 1:
        raise ValueError("m must be at least 1")
    if p.ndim != 1 or np.any(p < 0) or not np.isfinite(p).all():
        raise ValueError("probs must be a one-dimensional nonnegative vector")
    total = p.sum()
    if total <= 0:
        raise ValueError("probs must have positive mass")
    p = p / total
    n = p.size
    rows = 1 if size is None else int(size)
    if m < n:
        cdf = np.cumsum(p)
        u = rng.random((rows, m)) * cdf[-1]
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), n - 1)
        idx += (np.arange(rows) * n)[:, None]
        counts = np.bincount(idx.ravel(), minlength=rows * n).reshape(rows, n)
    else:
        counts = rng.multinomial(m, p, size=rows)
    counts = counts.astype(np.int64, copy=False)
    return counts[0] if size is None else counts
