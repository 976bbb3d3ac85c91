"""Exact Monte-Carlo significance levels with re-estimation per simulation.

For observed counts the model is fitted, each statistic is computed against
the fitted distribution, and then every simulation

1. draws ``m`` i.i.d. values from the fitted distribution,
2. re-fits the model to the simulated counts, and
3. computes the statistic against the re-fitted distribution.

The confidence level is the fraction of simulated statistics strictly less
than the observed one; the significance level is its complement, so ties
count against rejection.

Simulations run in fixed-size blocks.  Block ``b`` draws from the random
stream ``(seed, ..., b)``, so results are identical for any number of
worker threads.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from discretegof.families.base import FitResult, ModelFamily
from discretegof.rng import RngStream, as_stream, default_workers, sample_counts
from discretegof.statistics import ALL_STATISTICS, StatisticKind, evaluate

# Statistics that agree to this relative precision are treated as equal, so
# rounding noise in mathematically tied values cannot flip a comparison.
TIE_RTOL = 1e-10

MAX_BLOCK = 4096
BLOCK_CELLS = 1 << 22


def block_size(n):
    """Simulations per block for ``n`` bins (a function of ``n`` only)."""
    return int(max(16, min(MAX_BLOCK, BLOCK_CELLS // max(n, 1))))


def less_threshold(observed):
    """Simulated values strictly below this count as less than ``observed``."""
    obs = float(observed)
    if not np.isfinite(obs) or obs == 0.0:
        return obs
    return obs - TIE_RTOL * abs(obs)


def count_below(values, observed):
    """How many entries of ``values`` are less than ``observed`` (tie-aware)."""
    return int(np.count_nonzero(np.asarray(values) < less_threshold(observed)))


def significance_from_null(null_values, observed):
    """Significance of ``observed`` against a sample of null statistics."""
    v = np.asarray(null_values)
    return (v.size - count_below(v, observed)) / v.size


def std_error(alpha, sims):
    """Monte-Carlo standard error ``sqrt(alpha (1 - alpha) / sims)``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if sims < 1:
        raise ValueError("need at least one simulation")
    return float(np.sqrt(alpha * (1.0 - alpha) / sims))


def _parse_kinds(stats):
    if stats is None:
        return ALL_STATISTICS
    if isinstance(stats, (str, StatisticKind)):
        stats = [stats]
    kinds = []
    for s in stats:
        k = StatisticKind.parse(s)
        if k not in kinds:
            kinds.append(k)
    if not kinds:
        raise ValueError("no statistics requested")
    return tuple(kinds)


def run_blocks(work, sims, n, stream, workers=None):
    """Apply ``work(rng, size)`` to each simulation block, in block order."""
    sims = int(sims)
    if sims < 1:
        raise ValueError("need at least one simulation")
    size = block_size(n)
    sizes = [size] * (sims // size)
    if sims % size:
        sizes.append(sims % size)
    workers = default_workers() if workers is None else max(1, int(workers))

    def one(b):
        return work(stream.child(b).generator(), sizes[b])

    if workers == 1 or len(sizes) == 1:
        return [one(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(sizes))))


def simulate_statistics(family, probs, m, sims, seed, stats=None, workers=None):
    """Null statistics for ``sims`` simulated data sets, refitting each.

    Returns ``{kind: array of shape (sims,)}`` in simulation order.
    """
    kinds = _parse_kinds(stats)
    stream = as_stream(seed)
    p = np.asarray(probs, dtype=np.float64)

    def work(rng, size):
        c, q = family.scored(sample_counts(p, m, rng, size=size))
        return evaluate(kinds, c, q)

    parts = run_blocks(work, sims, family.n, stream, workers)
    return {k: np.concatenate([np.atleast_1d(part[k]) for part in parts]) for k in kinds}


@dataclass(frozen=True)
class StatisticResult:
    kind: StatisticKind
    observed: float
    significance: float
    confidence: float
    std_error: float
    simulations: int

    def to_dict(self):
        return {
            "statistic": self.kind.value,
            "observed": self.observed,
            "significance": self.significance,
            "confidence": self.confidence,
            "std_error": self.std_error,
            "simulations": self.simulations,
        }


@dataclass(frozen=True)
class TestReport:
    family: str
    n: int
    m: int
    simulations: int
    seed: int
    stream_index: tuple
    fit: FitResult
    results: dict
    null_values: dict | None = field(default=None, repr=False, compare=False)

    __test__ = False  # not a pytest class

    def __getitem__(self, kind):
        return self.results[StatisticKind.parse(kind)]

    def significance(self, kind):
        return self[kind].significance

    def to_dict(self):
        return {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "simulations": self.simulations,
            "seed": self.seed,
            "stream_index": list(self.stream_index),
            "fitted_parameter": self.fit.parameter.to_dict(),
            "log_likelihood": self.fit.log_likelihood,
            "statistics": [r.to_dict() for r in self.results.values()],
        }


def exact_test(counts, family: ModelFamily, stats=None, sims=40_000, seed=0, workers=None, keep_null=False):
    """Monte-Carlo significance levels of ``counts`` under ``family``.

    Parameters
    ----------
    counts : array_like of int, shape (n,)
    family : ModelFamily
    stats : iterable of StatisticKind or str, optional
        Defaults to all five statistics.  All share the same simulated data.
    sims : int
        Number of Monte-Carlo simulations.
    seed : int or RngStream
    workers : int, optional
        Worker threads; the result does not depend on it.
    keep_null : bool
        Keep every simulated statistic in ``report.null_values``.

    Returns
    -------
    TestReport
    """
    kinds = _parse_kinds(stats)
    stream = as_stream(seed)
    c = np.asarray(counts)
    if c.ndim != 1 or c.size != family.n:
        raise ValueError(f"{family.name} expects {family.n} bins, got shape {c.shape}")
    if np.any(c < 0) or np.any(c != np.round(c)):
        raise ValueError("counts must be nonnegative integers")
    c = c.astype(np.int64)
    m = int(c.sum())
    fit = family.fit(c)
    p_hat = family.probs(fit.parameter)
    oc, op = family.scored(c)
    observed = {k: float(np.atleast_1d(v)[0]) for k, v in evaluate(kinds, oc, op).items()}
    thresholds = {k: less_threshold(v) for k, v in observed.items()}

    def work(rng, size):
        sc, sq = family.scored(sample_counts(p_hat, m, rng, size=size))
        vals = evaluate(kinds, sc, sq)
        below = {k: int(np.count_nonzero(np.atleast_1d(vals[k]) < thresholds[k])) for k in kinds}
        return below, (vals if keep_null else None)

    parts = run_blocks(work, sims, family.n, stream, workers)
    results = {}
    for k in kinds:
        below = sum(part[0][k] for part in parts)
        significance = (sims - below) / sims
        results[k] = StatisticResult(
            kind=k,
            observed=observed[k],
            significance=significance,
            confidence=1.0 - significance,
            std_error=std_error(significance, sims),
            simulations=int(sims),
        )
    null = None
    if keep_null:
        null = {k: np.concatenate([np.atleast_1d(part[1][k]) for part in parts]) for k in kinds}
    return TestReport(
        family=family.name,
        n=family.n,
        m=m,
        simulations=int(sims),
        seed=stream.master_seed,
        stream_index=stream.stream_index,
        fit=fit,
        results=results,
        null_values=null,
    )


def write_null_csv(report, path):
    """Dump the simulated null statistics of a report, one column per statistic."""
    if report.null_values is None:
        raise ValueError("the report was produced without keep_null=True")
    kinds = list(report.null_values)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([k.value for k in kinds])
        cols = [report.null_values[k] for k in kinds]
        for row in zip(*cols):
            writer.writerow([repr(float(v)) for v in row])


def null_pvalue_distribution(family, theta, m, outer, inner, seed=0, stats=None, workers=None):
    """Significance levels of repeated experiments drawn from the model itself.

    Each of ``outer`` experiments draws ``m`` values from
    ``family.probs(theta)`` and is tested with :func:`exact_test` using
    ``inner`` simulations.  Returns ``{kind: array of shape (outer,)}``.
    """
    kinds = _parse_kinds(stats)
    stream = as_stream(seed)
    p = family.probs(theta)
    levels = {k: np.empty(int(outer)) for k in kinds}
    for i in range(int(outer)):
        data = sample_counts(p, m, stream.child(0, i).generator())
        report = exact_test(data, family, kinds, sims=inner, seed=stream.child(1, i), workers=workers)
        for k in kinds:
            levels[k][i] = report[k].significance
    return levels


@dataclass(frozen=True)
class UniformityVerdict:
    sup_distance: float
    band: float
    discreteness: float
    passed: bool
    discrete: bool

    @property
    def label(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} (discrete, band widened)" if self.discrete else verdict


def dkw_band(samples, confidence=0.99):
    """Dvoretzky-Kiefer-Wolfowitz half-width for ``samples`` draws."""
    return float(np.sqrt(np.log(2.0 / (1.0 - confidence)) / (2.0 * samples)))


def uniformity_verdict(levels, confidence=0.99):
    """Compare an empirical distribution of levels with the uniform law.

    ``sup_distance`` is the Kolmogorov distance between the empirical CDF
    and the identity on [0, 1].  When the levels only take a few distinct
    values, the largest gap between them bounds how far even an exact
    (discrete) p-value can sit from the diagonal; that gap widens the band.
    """
    x = np.sort(np.asarray(levels, dtype=np.float64))
    k = x.size
    if k == 0:
        raise ValueError("no levels given")
    upper = np.arange(1, k + 1) / k - x
    lower = x - np.arange(k) / k
    d = float(max(upper.max(), lower.max()))
    band = dkw_band(k, confidence)
    support = np.unique(np.concatenate([[0.0], x, [1.0]]))
    gap = float(np.diff(support).max())
    discrete = gap > band
    allowance = gap if discrete else 0.0
    return UniformityVerdict(d, band, allowance, d <= band + allowance, discrete)
