import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discretegof.datasets import (
    FIXTURES,
    ParseError,
    dump_counts,
    fixture,
    load_counts,
    parse_json,
    parse_text,
    truncate,
)


class TestFixtures:
    @pytest.mark.parametrize(
        "ident, total",
        [("rutherford", 2608), ("yeast", 400), ("rhesus", 8297), ("antigen", 45),
         ("health", 335), ("health-var1", 335), ("health-var2", 335)],
    )
    def test_totals(self, ident, total):
        assert fixture(ident).m == total

    def test_rutherford_four_particles(self):
        assert fixture("rutherford").counts[4] == 532

    def test_rhesus_diagonal_cell(self):
        assert fixture("rhesus").table[5][5] == 1312

    def test_shapes(self):
        assert fixture("rhesus").n == 45
        assert fixture("antigen").n == 10
        assert fixture("health").as_array().shape == (5, 5)

    def test_variation_one_differs_in_two_cells(self):
        base = fixture("health").as_array()
        var = fixture("health-var1").as_array()
        diff = np.argwhere(base != var)
        assert [tuple(d) for d in diff] == [(1, 2), (2, 1)]
        assert base[1, 2] == 43 and base[2, 1] == 43
        assert var[1, 2] == 56 and var[2, 1] == 30

    def test_variation_two(self):
        base = fixture("health").as_array()
        var = fixture("health-var2").as_array()
        assert [tuple(d) for d in np.argwhere(base != var)] == [(2, 3), (3, 2)]
        assert (var[2, 3], var[3, 2]) == (19, 0)

    def test_immutable_counts_are_copies_on_truncate(self):
        c = fixture("rutherford").counts
        t = truncate(c, 5)
        t[0] = -1
        assert c[0] == 57

    def test_unknown(self):
        with pytest.raises(KeyError, match="available"):
            fixture("moons")

    def test_every_fixture_has_provenance(self):
        assert all(f.provenance for f in FIXTURES.values())


class TestTruncate:
    def test_drops_later_draws(self):
        t = truncate(fixture("rutherford").counts, 5)
        assert t.tolist() == [57, 203, 383, 525, 532]
        assert t.sum() == 1700

    @pytest.mark.parametrize("n", [1, 16])
    def test_bounds(self, n):
        with pytest.raises(ValueError):
            truncate(fixture("rutherford").counts, n)


class TestParsing:
    def test_text(self):
        c = parse_text("5 3 0 1")
        assert c.tolist() == [5, 3, 0, 1] and c.sum() == 9

    def test_text_multiline_with_comments(self):
        assert parse_text("# header\n1 2\n3\n").tolist() == [1, 2, 3]

    def test_json_table(self):
        t = parse_json('{"table": [[1,2],[3,4]]}')
        assert t.shape == (2, 2) and t.sum() == 10

    def test_json_bins(self):
        assert parse_json('{"bins": [4, 0, 2]}').tolist() == [4, 0, 2]

    def test_ragged_names_row(self):
        with pytest.raises(ParseError, match="row 2"):
            parse_json('{"table": [[1,2],[3]]}')

    def test_negative_names_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_text("1 2\n3 -4\n")

    def test_non_integer_names_line(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_text("1 2.5")

    def test_fractional_json_value(self):
        with pytest.raises(ParseError, match=r"bins\[1\]"):
            parse_json('{"bins": [1, 2.5]}')

    def test_bad_json(self):
        with pytest.raises(ParseError, match="line"):
            parse_json('{"bins": [1, 2,')

    @pytest.mark.parametrize("text", ["", "# nothing\n"])
    def test_empty(self, text):
        with pytest.raises(ParseError):
            parse_text(text)

    def test_parse_error_is_value_error(self):
        assert issubclass(ParseError, ValueError)


class TestFiles:
    def test_load_infers_format(self, tmp_path):
        (tmp_path / "a.txt").write_text("5 3 0 1\n")
        (tmp_path / "b.json").write_text('{"bins": [5, 3]}')
        assert load_counts(tmp_path / "a.txt").tolist() == [5, 3, 0, 1]
        assert load_counts(tmp_path / "b.json").tolist() == [5, 3]

    def test_unknown_format(self, tmp_path):
        (tmp_path / "a.txt").write_text("1")
        with pytest.raises(ValueError):
            load_counts(tmp_path / "a.txt", format="xml")

    def test_text_cannot_hold_table(self, tmp_path):
        with pytest.raises(ValueError):
            dump_counts(np.ones((2, 2)), tmp_path / "t.txt")

    @given(st.lists(st.integers(0, 10**9), min_size=1, max_size=40))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_bins(self, tmp_path_factory, values):
        d = tmp_path_factory.mktemp("rt")
        for fmt in ("text", "json"):
            path = d / f"c.{fmt}"
            dump_counts(values, path, fmt)
            assert load_counts(path, fmt).tolist() == values

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**31))
    @settings(max_examples=30, deadline=None)
    def test_round_trip_table(self, tmp_path_factory, rows, cols, seed):
        table = np.random.default_rng(seed).integers(0, 1000, size=(rows, cols))
        path = tmp_path_factory.mktemp("rt") / "t.json"
        dump_counts(table, path, "json")
        assert np.array_equal(load_counts(path), table)

    @pytest.mark.parametrize("ident", sorted(FIXTURES))
    def test_fixture_round_trip(self, tmp_path, ident):
        arr = fixture(ident).as_array()
        path = tmp_path / "f.json"
        dump_counts(arr, path, "json")
        assert np.array_equal(load_counts(path), arr)
