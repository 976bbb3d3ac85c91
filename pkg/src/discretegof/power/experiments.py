"""Catalog of (model, actual distribution) pairs used in power studies.

Every experiment is indexed by a grid variable: the number of bins ``n``
for most, or a shape parameter ``t`` for experiments with a fixed number of
bins.  Experiments are addressable by a descriptive slug or by their
numeric id (``"5.1.1"`` .. ``"5.2.10"``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from discretegof.families import (
    IntegerSplit,
    Paired,
    RebinnedGeometric,
    ThreePoint,
    TruncatedPoisson,
    TwoPoint,
    Zipf,
    fully_specified,
    heavy_head,
    power_law,
    step_permuted,
    truncated_geometric,
    truncated_poisson,
)


@dataclass(frozen=True)
class Setup:
    family: object
    actual: np.ndarray
    n: int
    t: float | None = None


@dataclass(frozen=True)
class Experiment:
    id: str
    slug: str
    description: str
    grid: str  # "n" or "t"
    default_grid: tuple
    builder: object
    parameterized: bool

    def build(self, value):
        """Family and actual distribution at one grid point."""
        if self.grid == "n":
            value = int(value)
        else:
            value = float(value)
        family, actual = self.builder(value)
        actual = np.asarray(actual, dtype=np.float64)
        if actual.size != family.n:
            raise ValueError(f"{self.id}: actual has {actual.size} bins, model {family.n}")
        if abs(actual.sum() - 1.0) > 1e-9 or np.any(actual < 0):
            raise ValueError(f"{self.id}: actual is not a probability vector")
        if self.grid == "n":
            return Setup(family, actual, family.n)
        return Setup(family, actual, family.n, value)


def spike_centre(n):
    """Interior bin index ``3n/8`` used by the spiked Poisson experiments."""
    if (3 * n) % 8:
        raise ValueError(f"n = {n}: 3n/8 must be an integer (n divisible by 8)")
    c = 3 * n // 8
    if c < 2 or c + 1 > n:
        raise ValueError(f"n = {n}: 3n/8 = {c} must be an interior bin index (n >= 8)")
    return c


def spiked(p, centre):
    """Move mass within bins ``centre-1..centre+1`` to proportions 1/10, 4/5, 1/10."""
    q = np.array(p, dtype=np.float64)
    i = centre - 1  # zero-based
    s = q[i - 1] + q[i] + q[i + 1]
    q[i - 1], q[i], q[i + 1] = s / 10.0, 4.0 * s / 5.0, s / 10.0
    return q


def _heavy_head_pair(n):
    model = heavy_head(n)
    actual = model.copy()
    actual[0], actual[1] = 3 / 8, 1 / 8
    return fully_specified(model, "heavy-head"), actual


def _laws(model_s, actual_s):
    def build(n):
        return fully_specified(power_law(n, model_s), f"power-law:{model_s:g}"), power_law(n, actual_s)
    return build


def _poisson_spike(n):
    c = spike_centre(n)
    p = truncated_poisson(n, 3 * n / 8)
    return fully_specified(p, "poisson"), spiked(p, c)


def _harmonic_vs_geometric(t):
    return fully_specified(power_law(100, 1.0), "power-law:1"), truncated_geometric(100, t)


def _zipf_fit_vs_geometric(t):
    return Zipf(100), truncated_geometric(100, t)


def _geometric_fit_vs_zipf(t):
    return RebinnedGeometric(100), power_law(100, t)


def _poisson_fit_vs_shifted(t):
    return TruncatedPoisson(21), truncated_poisson(21, 5.0, shift=t)


def _poisson_fit_vs_spike(n):
    c = spike_centre(n)
    return TruncatedPoisson(n), spiked(truncated_poisson(n, 3 * n / 8), c)


def _two_point(n):
    actual = np.full(n, 1.0 / (4 * n - 8))
    actual[:2] = 3 / 8
    return TwoPoint(n), actual


def _three_point(n):
    actual = np.full(n, 1.0 / (2 * n - 6))
    actual[:3] = (1 / 4, 1 / 8, 1 / 8)
    return ThreePoint(n), actual


def _split(n):
    if n < 4:
        raise ValueError("need n >= 4")
    actual = np.full(n, 1.0 / (4 * n - 12))
    actual[:3] = 1 / 4
    return IntegerSplit(n), actual


def _zipf_perm(n):
    return Zipf(n, exponent=1.0, permute=True), power_law(n, 2.0)


def _perm_step(n):
    actual = np.full(n, 1.0 / (2 * n - 4))
    actual[:2] = 1 / 4
    return step_permuted(n), actual


def _paired(n):
    if n < 5:
        raise ValueError("need n >= 5")
    actual = np.full(n, 1.0 / (2 * n - 8))
    actual[:4] = (9 / 32, 3 / 32, 3 / 32, 1 / 32)
    return Paired(n), actual


_N_GRID = (8, 16, 32, 64, 128, 256, 512)
_EXPERIMENTS = [
    Experiment("5.1.1", "heavy-head", "two heavy bins (1/4, 1/4) vs (3/8, 1/8), flat tail", "n", _N_GRID, _heavy_head_pair, False),
    Experiment("5.1.2", "harmonic-vs-square", "p ~ 1/k vs actual ~ 1/k^2", "n", _N_GRID, _laws(1.0, 2.0), False),
    Experiment("5.1.3", "harmonic-vs-sqrt", "p ~ 1/k vs actual ~ 1/sqrt(k)", "n", _N_GRID, _laws(1.0, 0.5), False),
    Experiment("5.1.4", "sqrt-vs-harmonic", "p ~ 1/sqrt(k) vs actual ~ 1/k", "n", _N_GRID, _laws(0.5, 1.0), False),
    Experiment("5.1.5", "square-vs-harmonic", "p ~ 1/k^2 vs actual ~ 1/k", "n", _N_GRID, _laws(2.0, 1.0), False),
    Experiment("5.1.6", "poisson-spike", "Poisson(3n/8) vs spiked Poisson", "n", _N_GRID, _poisson_spike, False),
    Experiment("5.1.7", "harmonic-vs-geometric", "p ~ 1/k on 100 bins vs geometric t^k", "t", (0.5, 0.7, 0.9, 0.95), _harmonic_vs_geometric, False),
    Experiment("5.2.1", "zipf-fit-vs-geometric", "fitted power law on 100 bins vs geometric t^k", "t", (0.5, 0.7, 0.9, 0.95), _zipf_fit_vs_geometric, True),
    Experiment("5.2.2", "geometric-fit-vs-zipf", "fitted rebinned geometric on 100 bins vs 1/k^t", "t", (0.5, 1.0, 1.5, 2.0), _geometric_fit_vs_zipf, True),
    Experiment("5.2.3", "poisson-fit-vs-shifted", "fitted Poisson on 21 bins vs shifted Poisson(5)", "t", (0.25, 0.5, 0.75, 1.0), _poisson_fit_vs_shifted, True),
    Experiment("5.2.4", "poisson-fit-vs-spike", "fitted Poisson vs spiked Poisson(3n/8)", "n", _N_GRID, _poisson_fit_vs_spike, True),
    Experiment("5.2.5", "two-point", "(theta, 1/2 - theta) head vs (3/8, 3/8)", "n", _N_GRID, _two_point, True),
    Experiment("5.2.6", "three-point", "(theta, theta, 1/2 - 2 theta) head vs (1/4, 1/8, 1/8)", "n", _N_GRID, _three_point, True),
    Experiment("5.2.7", "split", "integer split point vs three heavy bins", "n", _N_GRID, _split, True),
    Experiment("5.2.8", "zipf-perm-vs-square", "1/k with unknown order vs 1/k^2", "n", _N_GRID, _zipf_perm, True),
    Experiment("5.2.9", "perm-step", "(3/8, 1/8, flat) with unknown order vs (1/4, 1/4, flat)", "n", _N_GRID, _perm_step, True),
    Experiment("5.2.10", "paired", "two paired parameters vs (9, 3, 3, 1)/32 head", "n", _N_GRID, _paired, True),
]

EXPERIMENTS = {e.id: e for e in _EXPERIMENTS}
_BY_SLUG = {e.slug: e for e in _EXPERIMENTS}


def catalog_experiment(ident):
    """Look up an experiment by numeric id or slug."""
    exp = EXPERIMENTS.get(ident) or _BY_SLUG.get(ident)
    if exp is None:
        raise KeyError(f"unknown experiment {ident!r}; known: {', '.join(EXPERIMENTS)}")
    return exp
