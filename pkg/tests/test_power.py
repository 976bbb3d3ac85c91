import csv
import io
import math

import numpy as np
import pytest

from discretegof.families import fully_specified, heavy_head, uniform
from discretegof.power import (
    CSV_COLUMNS,
    EXPERIMENTS,
    MinimalM,
    PowerConfig,
    catalog_experiment,
    minimal_m,
    power_at,
    power_rows,
    spike_centre,
    write_power_csv,
)
from discretegof.statistics import ALL_STATISTICS, DimensionError, StatisticKind


class TestCatalog:
    def test_seventeen_experiments(self):
        assert len(EXPERIMENTS) == 17
        assert sum(not e.parameterized for e in EXPERIMENTS.values()) == 7

    def test_heavy_head_at_eight_bins(self):
        s = catalog_experiment("5.1.1").build(8)
        assert s.family.fit_probs(np.ones(8, dtype=np.int64))[0] == pytest.approx([1 / 4, 1 / 4] + [1 / 12] * 6, abs=1e-15)
        assert s.actual == pytest.approx([3 / 8, 1 / 8] + [1 / 12] * 6, abs=1e-15)

    def test_paired_actual(self):
        s = catalog_experiment("5.2.10").build(16)
        assert s.actual[:4] == pytest.approx([9 / 32, 3 / 32, 3 / 32, 1 / 32], abs=1e-15)
        assert s.actual[4:] == pytest.approx(np.full(12, 1 / 24), abs=1e-15)

    def test_truncated_geometric_actual(self):
        s = catalog_experiment("5.1.7").build(0.5)
        k = np.arange(1, 101)
        expected = 0.5**k / (0.5**k).sum()
        assert s.n == 100 and s.t == 0.5
        assert s.actual == pytest.approx(expected, rel=1e-12, abs=1e-300)

    def test_slug_and_id_agree(self):
        assert catalog_experiment("heavy-head") is catalog_experiment("5.1.1")

    def test_unknown(self):
        with pytest.raises(KeyError):
            catalog_experiment("9.9.9")

    @pytest.mark.parametrize("ident", ["5.1.6", "5.2.4"])
    @pytest.mark.parametrize("n", [12, 20, 4])
    def test_spike_divisibility(self, ident, n):
        with pytest.raises(ValueError, match="3n/8"):
            catalog_experiment(ident).build(n)

    def test_spike_centre(self):
        assert spike_centre(16) == 6
        assert spike_centre(8) == 3

    @pytest.mark.parametrize("ident", sorted(EXPERIMENTS))
    def test_every_default_point_builds(self, ident):
        e = EXPERIMENTS[ident]
        for v in e.default_grid:
            s = e.build(v)
            assert s.actual.sum() == pytest.approx(1.0, abs=1e-12)
            assert s.actual.size == s.family.n


class TestConfig:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            PowerConfig(uniform(4), np.ones(5) / 5)

    @pytest.mark.parametrize(
        "kwargs", [dict(level=0.0), dict(level=1.0), dict(required_fraction=1.0), dict(m=0), dict(sims_alt=0)]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            PowerConfig(uniform(4), np.ones(4) / 4, **kwargs)

    def test_actual_must_be_distribution(self):
        with pytest.raises(ValueError):
            PowerConfig(uniform(2), [0.7, 0.7])


class TestPowerAt:
    @pytest.mark.parametrize("level", [0.01, 0.05])
    def test_size_of_test(self, level):
        p = heavy_head(16)
        cfg = PowerConfig(fully_specified(p), p, m=200, level=level, sims_alt=4000, sims_null=4000, seed=4)
        point = power_at(cfg)
        # the threshold is estimated from the null side too, so both sample sizes enter
        se = math.sqrt(level * (1 - level) * (1 / 4000 + 1 / 4000))
        for k in ALL_STATISTICS:
            assert abs(point[k] - level) <= 3 * se, (k, point[k])

    def test_size_of_test_parameterized(self):
        s = catalog_experiment("5.2.9").build(16)
        null_actual = s.family.fit_probs(np.round(s.actual * 1e6).astype(np.int64))[0]
        cfg = PowerConfig(s.family, null_actual, m=100, level=0.05, sims_alt=4000, sims_null=4000, seed=8)
        point = power_at(cfg)
        se = math.sqrt(0.05 * 0.95 * (1 / 4000 + 1 / 4000))
        for k in ALL_STATISTICS:
            assert abs(point[k] - 0.05) <= 3 * se, (k, point[k])

    def test_deterministic(self):
        s = catalog_experiment("5.2.5").build(16)
        cfg = PowerConfig(s.family, s.actual, m=60, sims_alt=500, sims_null=500, calibration=10_000, seed=2)
        assert power_at(cfg) == power_at(cfg)

    def test_thread_count_does_not_matter(self):
        s = catalog_experiment("5.1.3").build(32)
        base = dict(m=100, sims_alt=3000, sims_null=3000, seed=6)
        one = power_at(PowerConfig(s.family, s.actual, workers=1, **base))
        many = power_at(PowerConfig(s.family, s.actual, workers=8, **base))
        assert one == many

    def test_heavy_head_direction(self):
        s = catalog_experiment("5.1.1").build(16)
        point = power_at(PowerConfig(s.family, s.actual, m=200, sims_alt=2000, sims_null=2000, seed=1))
        assert point["rms"] > point["chi2"]
        assert point.std_error("rms") <= math.sqrt(0.25 / 2000)

    def test_exact_mode_agrees_with_fixed_mode(self):
        s = catalog_experiment("5.2.5").build(8)
        base = dict(m=60, sims_alt=150, sims_null=300, seed=3, stats=["rms"])
        fixed = power_at(PowerConfig(s.family, s.actual, fixed_theta_mode=True, calibration=100_000, **base))
        exact = power_at(PowerConfig(s.family, s.actual, fixed_theta_mode=False, **base))
        assert exact["rms"] == pytest.approx(fixed["rms"], abs=0.15)

    def test_occupied_zero_bin_is_detected_immediately(self):
        model = fully_specified([0.0, 0.5, 0.5])
        actual = [0.5, 0.25, 0.25]
        cfg = PowerConfig(model, actual, stats=["chi2", "rms"], sims_alt=2000, sims_null=2000, seed=0)
        result = minimal_m(cfg, m_bounds=(1, 1000))
        # probability of missing bin 1 entirely is 2^-m, which is below 1% once m >= 7
        assert result[StatisticKind.CHI_SQUARE].m <= 8
        assert result[StatisticKind.RMS].m > result[StatisticKind.CHI_SQUARE].m


class TestMinimalM:
    def test_exceeds_bound(self):
        p = heavy_head(8)
        cfg = PowerConfig(fully_specified(p), p, stats=["rms"], sims_alt=300, sims_null=300, seed=0)
        r = minimal_m(cfg, m_bounds=(10, 80))[StatisticKind.RMS]
        assert isinstance(r, MinimalM)
        assert r.exceeds_bound and r.m is None and str(r) == "> 80"

    def test_bracket_resolution(self):
        s = catalog_experiment("5.1.2").build(16)
        cfg = PowerConfig(s.family, s.actual, stats=["rms"], sims_alt=1000, sims_null=1000, seed=5)
        r = minimal_m(cfg)[StatisticKind.RMS]
        assert not r.exceeds_bound and r.power >= 0.99
        below_m, below_power = r.below
        assert below_power < 0.99
        assert r.m - below_m <= max(1, math.floor(0.02 * r.m))

    def test_invalid_bounds(self):
        cfg = PowerConfig(uniform(3), np.ones(3) / 3, sims_alt=10, sims_null=10)
        with pytest.raises(ValueError):
            minimal_m(cfg, m_bounds=(50, 10))


@pytest.mark.slow
class TestLevelConsistency:
    @pytest.mark.parametrize("ident", sorted(EXPERIMENTS))
    def test_weaker_criterion_needs_no_more_draws(self, ident):
        e = EXPERIMENTS[ident]
        v = e.default_grid[1] if e.grid == "n" else e.default_grid[-1]
        s = e.build(v)
        found = {}
        for level, frac in ((0.05, 0.95), (0.01, 0.99)):
            cfg = PowerConfig(s.family, s.actual, level=level, required_fraction=frac, seed=1)
            found[level] = minimal_m(cfg, m_bounds=(10, 20_000))
        for k in ALL_STATISTICS:
            lo, hi = found[0.05][k], found[0.01][k]
            assert not hi.exceeds_bound
            assert lo.m <= hi.m + max(1, math.floor(0.02 * hi.m)), (k, lo.m, hi.m)


class TestCsv:
    def test_columns_and_rows(self):
        s = catalog_experiment("5.1.1").build(8)
        point = power_at(PowerConfig(s.family, s.actual, m=50, sims_alt=200, sims_null=200, stats=["rms", "chi2"]))
        text = write_power_csv(power_rows("5.1.1", point))
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0].keys()) == CSV_COLUMNS
        assert [r["statistic"] for r in rows] == ["rms", "chi2"]
        assert rows[0]["t"] == "" and rows[0]["n"] == "8" and rows[0]["sims"] == "200"
        assert float(rows[0]["rejection_fraction"]) == point["rms"]

    def test_t_column(self):
        s = catalog_experiment("5.2.3").build(0.5)
        point = power_at(PowerConfig(s.family, s.actual, m=40, sims_alt=50, sims_null=50, calibration=1000, stats=["ft"]))
        buf = io.StringIO()
        write_power_csv(power_rows("5.2.3", point, t=0.5), buf)
        assert buf.getvalue().splitlines()[1].split(",")[3] == "0.5"
