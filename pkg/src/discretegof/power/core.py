"""Power and minimal sample size for a (model family, actual distribution) pair.

The rejection threshold for each statistic comes from ``sims_null`` data
sets simulated under the model.  For a parameterized family the model
parameter is either fitted once to a large calibration sample of the
actual distribution (``fixed_theta_mode``) or fitted to each alternative
data set separately, which is exact but quadratic in cost.  Every
simulated data set, null or alternative, is refitted before scoring.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from discretegof.engine import (
    TIE_RTOL,
    _parse_kinds,
    exact_test,
    simulate_statistics,
)
from discretegof.rng import as_stream, sample_counts
from discretegof.statistics import DimensionError

CSV_COLUMNS = ("experiment_id", "statistic", "n", "t", "m", "rejection_fraction", "level", "sims")


@dataclass(frozen=True)
class PowerConfig:
    """Everything needed to estimate one point of a power curve.

    Parameters
    ----------
    family : ModelFamily
    actual : array_like
        Distribution that generates the alternative draws.
    m : int
        Draws per data set.
    level : float
        A data set is rejected when its significance is at most ``level``.
    required_fraction : float
        Power needed to call the distributions distinguishable.
    sims_alt, sims_null : int
        Simulations on the alternative and null sides.
    fixed_theta_mode : bool
        Fit the null parameter once, from ``calibration`` draws of ``actual``.
    calibration : int
    stats : sequence, optional
        Statistics to evaluate (all five by default).
    seed : int or RngStream
    workers : int, optional
    """

    family: object
    actual: np.ndarray
    m: int = 200
    level: float = 0.01
    required_fraction: float = 0.99
    sims_alt: int = 4000
    sims_null: int = 4000
    fixed_theta_mode: bool = True
    calibration: int = 1_000_000
    stats: tuple | None = None
    seed: object = 0
    workers: int | None = None

    def __post_init__(self):
        actual = np.asarray(self.actual, dtype=np.float64)
        if actual.ndim != 1 or actual.size != self.family.n:
            raise DimensionError(f"actual has shape {actual.shape}, model has {self.family.n} bins")
        if np.any(actual < 0) or abs(actual.sum() - 1.0) > 1e-9:
            raise ValueError("actual must be a probability vector")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie in (0, 1)")
        if not 0.0 < self.required_fraction < 1.0:
            raise ValueError("required_fraction must lie in (0, 1)")
        if self.m < 1 or self.sims_alt < 1 or self.sims_null < 1:
            raise ValueError("m and simulation counts must be positive")
        object.__setattr__(self, "actual", actual)
        object.__setattr__(self, "stats", _parse_kinds(self.stats))


@dataclass(frozen=True)
class PowerPoint:
    n: int
    m: int
    level: float
    sims_alt: int
    sims_null: int
    rejection_fraction: dict
    null_parameter: object = field(default=None, compare=False)

    def __getitem__(self, kind):
        from discretegof.statistics import StatisticKind

        return self.rejection_fraction[StatisticKind.parse(kind)]

    def std_error(self, kind):
        f = self[kind]
        return math.sqrt(f * (1.0 - f) / self.sims_alt)


def _null_probs(config, stream):
    family = config.family
    if family.param_kind == "none":
        return family.fit_probs(np.ones(family.n, dtype=np.int64))[0], None
    draws = sample_counts(config.actual, config.calibration, stream.child(2).generator())
    fit = family.fit(draws)
    return family.probs(fit.parameter), fit.parameter


def _confidences(null_sorted, alt):
    """Fraction of null values strictly below each alternative value."""
    a = np.asarray(alt, dtype=np.float64)
    finite = np.isfinite(a) & (a != 0.0)
    with np.errstate(invalid="ignore"):
        thr = np.where(finite, a - TIE_RTOL * np.abs(a), a)
    return np.searchsorted(null_sorted, thr, side="left") / null_sorted.size


def power_at(config: PowerConfig) -> PowerPoint:
    """Estimate the rejection fraction of each statistic at ``config.m`` draws."""
    stream = as_stream(config.seed)
    family, kinds = config.family, config.stats
    need = 1.0 - config.level - 1e-12
    fixed = config.fixed_theta_mode or family.param_kind == "none"
    theta = None
    if fixed:
        p0, theta = _null_probs(config, stream)
        null = simulate_statistics(family, p0, config.m, config.sims_null, stream.child(0), kinds, config.workers)
        alt = simulate_statistics(family, config.actual, config.m, config.sims_alt, stream.child(1), kinds, config.workers)
        fractions = {}
        for k in kinds:
            conf = _confidences(np.sort(null[k]), alt[k])
            fractions[k] = float(np.count_nonzero(conf >= need)) / config.sims_alt
    else:
        hits = dict.fromkeys(kinds, 0)
        alt_stream = stream.child(3)
        for i in range(config.sims_alt):
            data = sample_counts(config.actual, config.m, alt_stream.child(0, i).generator())
            report = exact_test(data, family, kinds, config.sims_null, alt_stream.child(1, i), config.workers)
            for k in kinds:
                hits[k] += report[k].confidence >= need
        fractions = {k: hits[k] / config.sims_alt for k in kinds}
    return PowerPoint(
        n=family.n,
        m=config.m,
        level=config.level,
        sims_alt=config.sims_alt,
        sims_null=config.sims_null,
        rejection_fraction=fractions,
        null_parameter=theta,
    )


@dataclass(frozen=True)
class MinimalM:
    """Outcome of a minimal sample size search for one statistic."""

    kind: object
    m: int | None
    exceeds_bound: bool
    bound: int
    power: float | None
    below: tuple | None = None  # (m, power) just under the answer, when probed

    def __str__(self):
        if self.exceeds_bound:
            return f"> {self.bound}"
        return str(self.m)


def _search(power_of, lo, hi, target, resolution):
    """Smallest tested ``m`` in ``[lo, hi]`` with ``power_of(m) >= target``."""
    if power_of(lo) >= target:
        return lo
    fail = lo
    m = lo
    while True:
        m = min(2 * m, hi)
        if power_of(m) >= target:
            ok = m
            break
        fail = m
        if m >= hi:
            return None
    while ok - fail > max(1, math.floor(resolution * ok)):
        mid = (fail + ok) // 2
        if power_of(mid) >= target:
            ok = mid
        else:
            fail = mid
    return ok


def minimal_m(config: PowerConfig, m_bounds=(10, 100_000), resolution=0.02):
    """Smallest ``m`` at which each statistic reaches ``required_fraction``.

    Geometric doubling from ``m_bounds[0]`` brackets the answer and
    bisection narrows it until the bracket is within ``resolution`` of
    ``m``.  Power is assumed nondecreasing in ``m``.  Evaluations at the
    same ``m`` are shared by all statistics, and the random stream for a
    given ``m`` depends only on ``m`` and the seed.

    Returns
    -------
    dict
        ``{kind: MinimalM}``.
    """
    lo, hi = (int(b) for b in m_bounds)
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= m_bounds[0] <= m_bounds[1]")
    stream = as_stream(config.seed)
    cache = {}

    def point(m):
        if m not in cache:
            cache[m] = power_at(replace(config, m=m, seed=stream.child(m)))
        return cache[m]

    out = {}
    for k in config.stats:
        found = _search(lambda m: point(m).rejection_fraction[k], lo, hi, config.required_fraction, resolution)
        if found is None:
            out[k] = MinimalM(k, None, True, hi, None)
            continue
        probed = [m for m in cache if m < found]
        below = None
        if probed:
            prev = max(probed)
            below = (prev, cache[prev].rejection_fraction[k])
        out[k] = MinimalM(k, found, False, hi, cache[found].rejection_fraction[k], below)
    return out


def power_rows(experiment_id, point: PowerPoint, t=None):
    """CSV-ready dictionaries, one per statistic."""
    return [
        {
            "experiment_id": experiment_id,
            "statistic": k.value,
            "n": point.n,
            "t": "" if t is None else t,
            "m": point.m,
            "rejection_fraction": f,
            "level": point.level,
            "sims": point.sims_alt,
        }
        for k, f in point.rejection_fraction.items()
    ]


def write_power_csv(rows, fh=None):
    """Write rows with :data:`CSV_COLUMNS`; returns the text when ``fh`` is None."""
    buf = io.StringIO() if fh is None else fh
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue() if fh is None else None
