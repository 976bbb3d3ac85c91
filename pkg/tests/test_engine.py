import math

import numpy as np
import pytest

from discretegof.datasets import fixture
from discretegof.engine import (
    TIE_RTOL,
    block_size,
    count_below,
    dkw_band,
    exact_test,
    less_threshold,
    null_pvalue_distribution,
    run_blocks,
    significance_from_null,
    simulate_statistics,
    std_error,
    uniformity_verdict,
    write_null_csv,
)
from discretegof.families import (
    HardyWeinberg,
    Parameter,
    TruncatedPoisson,
    fully_specified,
    heavy_head,
    step_permuted,
    uniform,
)
from discretegof.rng import THREADS_ENV, RngStream, as_stream, default_workers
from discretegof.statistics import StatisticKind

RMS, CHI2 = StatisticKind.RMS, StatisticKind.CHI_SQUARE


@pytest.fixture(scope="module")
def heavy_report():
    fam = fully_specified(heavy_head(16))
    data = np.array([15, 5] + [0] * 14)
    return exact_test(data, fam, sims=4000, seed=3, keep_null=True)


class TestStdError:
    @pytest.mark.parametrize(
        "alpha, sims, expected",
        [(0.5, 10_000, 0.005), (0.0, 10, 0.0), (1.0, 10, 0.0), (0.1, 40_000, 0.0015)],
    )
    def test_values(self, alpha, sims, expected):
        assert std_error(alpha, sims) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("alpha, sims", [(-0.1, 10), (1.1, 10), (0.5, 0)])
    def test_invalid(self, alpha, sims):
        with pytest.raises(ValueError):
            std_error(alpha, sims)


class TestComparisons:
    def test_ties_are_not_less(self):
        assert count_below([1.0, 2.0, 2.0, 3.0], 2.0) == 1

    def test_rounding_noise_counts_as_tie(self):
        x = 0.1 + 0.2
        assert count_below([0.3], x) == 0
        assert less_threshold(x) == pytest.approx(x * (1 - TIE_RTOL))

    def test_infinite_observed(self):
        assert significance_from_null([1.0, 5.0, 1e300], math.inf) == 0.0

    def test_zero_observed(self):
        assert significance_from_null([0.0, 0.1, 0.2], 0.0) == 1.0

    def test_significance_nonincreasing_in_observed(self, heavy_report):
        null = heavy_report.null_values[RMS]
        grid = np.linspace(0, null.max() * 1.1, 200)
        levels = [significance_from_null(null, x) for x in grid]
        assert all(b <= a for a, b in zip(levels, levels[1:]))

    @pytest.mark.parametrize(
        "kind, transform",
        [(StatisticKind.RMS, np.square), (StatisticKind.CHI_SQUARE, lambda x: x / 20.0),
         (StatisticKind.G_SQUARE, np.sqrt), (StatisticKind.FREEMAN_TUKEY, np.log1p)],
    )
    def test_monotone_transform_invariance(self, heavy_report, kind, transform):
        null = heavy_report.null_values[kind]
        obs = heavy_report[kind].observed
        assert significance_from_null(transform(null), transform(obs)) == significance_from_null(null, obs)
        assert significance_from_null(null, obs) == heavy_report[kind].significance


class TestExactTest:
    def test_report_fields(self, heavy_report):
        for r in heavy_report.results.values():
            assert r.significance + r.confidence == 1.0
            assert r.std_error == pytest.approx(std_error(r.significance, 4000))
            assert r.simulations == 4000
        assert heavy_report.m == 20
        assert heavy_report.seed == 3

    def test_heavy_head_rms_detects(self, heavy_report):
        assert heavy_report.significance("rms") < 0.005
        assert heavy_report.significance("rms") < heavy_report.significance("chi2")

    def test_perfect_fit_has_zero_confidence(self):
        fam = fully_specified([0.25, 0.25, 0.5])
        report = exact_test(np.array([1, 1, 2]), fam, ["rms", "chi2", "g2", "ft"], sims=500, seed=1)
        for r in report.results.values():
            assert r.observed == pytest.approx(0.0, abs=1e-15)
            assert r.confidence == 0.0

    def test_impossible_outcome_has_full_confidence(self):
        fam = fully_specified([0.0, 0.5, 0.5])
        report = exact_test(np.array([1, 3, 3]), fam, ["chi2", "g2", "nll"], sims=500, seed=1)
        for r in report.results.values():
            assert r.observed == math.inf
            assert r.confidence == 1.0

    def test_uniform_model_chi_square_equals_rms(self):
        fam = uniform(6)
        rng = np.random.default_rng(0)
        for seed in range(5):
            data = rng.multinomial(30, np.ones(6) / 6)
            report = exact_test(data, fam, ["rms", "chi2"], sims=3000, seed=seed)
            assert report.significance("rms") == report.significance("chi2")

    def test_statistics_share_simulations(self):
        fam = uniform(4)
        data = np.array([5, 1, 1, 1])
        joint = exact_test(data, fam, ["rms", "chi2"], sims=1000, seed=9)
        alone = exact_test(data, fam, ["rms"], sims=1000, seed=9)
        assert joint["rms"] == alone["rms"]

    @pytest.mark.parametrize("workers", [2, 8])
    def test_thread_count_does_not_matter(self, workers):
        fam = HardyWeinberg(4)
        data = fixture("antigen").counts
        one = exact_test(data, fam, sims=20_000, seed=42, workers=1, keep_null=True)
        many = exact_test(data, fam, sims=20_000, seed=42, workers=workers, keep_null=True)
        assert one.results == many.results
        for k in one.null_values:
            assert np.array_equal(one.null_values[k], many.null_values[k])

    def test_seed_changes_result(self):
        fam = TruncatedPoisson(13)
        data = fixture("yeast").counts
        a = exact_test(data, fam, ["rms"], sims=2000, seed=1)
        b = exact_test(data, fam, ["rms"], sims=2000, seed=2)
        assert a["rms"].significance != b["rms"].significance

    def test_bad_counts(self):
        fam = uniform(3)
        with pytest.raises(ValueError):
            exact_test(np.array([1, 2]), fam, sims=10)
        with pytest.raises(ValueError):
            exact_test(np.array([1, -2, 3]), fam, sims=10)
        with pytest.raises(ValueError):
            exact_test(np.array([1.5, 2, 3]), fam, sims=10)

    def test_std_error_matches_spread(self):
        fam = fully_specified(heavy_head(8))
        data = np.array([9, 3, 1, 2, 1, 2, 1, 1])
        sims = 1000
        levels = np.array([exact_test(data, fam, ["chi2"], sims=sims, seed=s)["chi2"].significance for s in range(100)])
        reported = std_error(levels.mean(), sims)
        assert 1 / 1.5 < levels.std(ddof=1) / reported < 1.5

    def test_dump_null(self, heavy_report, tmp_path):
        path = tmp_path / "null.csv"
        write_null_csv(heavy_report, path)
        rows = path.read_text().splitlines()
        assert rows[0] == "rms,chi2,g2,ft,nll"
        assert len(rows) == 4001
        first = [float(v) for v in rows[1].split(",")]
        assert first[0] == heavy_report.null_values[RMS][0]

    def test_dump_requires_null(self):
        report = exact_test(np.array([3, 1]), uniform(2), sims=10)
        with pytest.raises(ValueError):
            write_null_csv(report, "unused.csv")

    def test_to_dict(self, heavy_report):
        d = heavy_report.to_dict()
        assert d["simulations"] == 4000
        assert [s["statistic"] for s in d["statistics"]] == ["rms", "chi2", "g2", "ft", "nll"]


class TestBlocks:
    def test_block_size_depends_on_n_only(self):
        assert block_size(2) == 4096
        assert block_size(45) == 4096
        assert block_size(34_000) == 123
        assert block_size(10**7) == 16

    def test_partial_last_block(self):
        sizes = run_blocks(lambda rng, size: size, 10_000, 10, as_stream(0), workers=1)
        assert sum(sizes) == 10_000 and sizes[-1] == 10_000 % 4096

    def test_simulate_statistics_shapes(self):
        out = simulate_statistics(uniform(5), np.ones(5) / 5, 12, 333, 0, ["rms", "ft"])
        assert set(out) == {RMS, StatisticKind.FREEMAN_TUKEY}
        assert out[RMS].shape == (333,)


class TestRngStreams:
    def test_same_stream_same_numbers(self):
        s = RngStream(7, (1, 2))
        assert s.generator().random() == RngStream(7, (1, 2)).generator().random()

    def test_children_differ(self):
        s = RngStream(7)
        assert s.child(0).generator().random() != s.child(1).generator().random()

    def test_default_workers_env(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "3")
        assert default_workers() == 3
        monkeypatch.delenv(THREADS_ENV)
        assert default_workers() == 1


class TestNullUniformity:
    def test_single_run(self):
        fam = step_permuted(8)
        theta = Parameter("permutation", np.empty(0), np.arange(8))
        levels = null_pvalue_distribution(fam, theta, 30, outer=1, inner=50, seed=0, stats=["rms"])
        assert levels[RMS].shape == (1,)
        assert 0.0 <= levels[RMS][0] <= 1.0

    def test_permutation_family_is_uniform(self):
        fam = step_permuted(16)
        theta = Parameter("permutation", np.empty(0), np.arange(16))
        levels = null_pvalue_distribution(fam, theta, 100, outer=400, inner=400, seed=5)
        for kind, v in levels.items():
            verdict = uniformity_verdict(v)
            assert verdict.passed, (kind, verdict)

    def test_fully_specified_large_m(self):
        fam = fully_specified(heavy_head(6))
        theta = Parameter("none", np.empty(0))
        levels = null_pvalue_distribution(fam, theta, 500, outer=300, inner=300, seed=2, stats=["rms", "chi2"])
        for v in levels.values():
            assert uniformity_verdict(v).passed

    def test_tiny_discrete_case_is_labelled(self):
        fam = uniform(2)
        theta = Parameter("none", np.empty(0))
        levels = null_pvalue_distribution(fam, theta, 3, outer=200, inner=200, seed=0, stats=["rms"])
        verdict = uniformity_verdict(levels[RMS])
        assert verdict.discrete
        assert "discrete, band widened" in verdict.label


class TestUniformityVerdict:
    def test_band_formula(self):
        assert dkw_band(2000, 0.99) == pytest.approx(math.sqrt(math.log(200) / 4000))

    def test_exact_uniform_grid_passes(self):
        levels = (np.arange(2000) + 0.5) / 2000
        v = uniformity_verdict(levels)
        assert v.passed and not v.discrete
        assert v.sup_distance == pytest.approx(0.00025)

    def test_skewed_levels_fail(self):
        levels = np.random.default_rng(1).uniform(size=2000) ** 2
        assert not uniformity_verdict(levels).passed

    def test_empty(self):
        with pytest.raises(ValueError):
            uniformity_verdict([])
