"""Published count tables and plain-text/JSON count files.

Fixture ids: ``rutherford`` (alpha-particle counts per 7.5 s interval),
``yeast`` (yeast cells per haemacytometer square), ``rhesus`` and
``antigen`` (genotype triangles), ``health``, ``health-var1`` and
``health-var2`` (5 x 5 matched-pair tables of self-rated health).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from discretegof.families.tables import flatten_triangle


class ParseError(ValueError):
    """A count file could not be read; the message names the location."""


@dataclass(frozen=True)
class Fixture:
    id: str
    counts: np.ndarray
    provenance: str
    table: tuple | None = None
    shape: str = "bins"  # "bins", "triangle" or "square"

    @property
    def m(self):
        return int(self.counts.sum())

    @property
    def n(self):
        return int(self.counts.size)

    def as_array(self):
        """Counts in their natural layout (square tables as 2-D arrays)."""
        if self.shape == "square":
            r = int(round(np.sqrt(self.n)))
            return self.counts.reshape(r, r)
        return self.counts


_RUTHERFORD = [57, 203, 383, 525, 532, 408, 273, 139, 45, 27, 10, 4, 0, 1, 1]
_YEAST = [0, 20, 43, 53, 86, 70, 54, 37, 18, 10, 5, 2, 2]
_RHESUS = (
    (1236,),
    (120, 3),
    (18, 0, 0),
    (982, 55, 7, 249),
    (32, 1, 0, 12, 0),
    (2582, 132, 20, 1162, 29, 1312),
    (6, 0, 0, 4, 0, 4, 0),
    (2, 0, 0, 0, 0, 0, 0, 0),
    (115, 5, 2, 53, 1, 149, 0, 0, 4),
)
_ANTIGEN = (
    (0,),
    (3, 1),
    (5, 18, 1),
    (3, 7, 5, 2),
)
# rows: US-born rating, columns: foreign-born rating (excellent .. poor)
_HEALTH = (
    (10, 21, 22, 5, 0),
    (24, 53, 43, 15, 3),
    (21, 43, 34, 11, 0),
    (3, 11, 8, 4, 1),
    (1, 1, 1, 0, 0),
)


def _modified(table, cells):
    rows = [list(r) for r in table]
    for (i, j), v in cells.items():
        rows[i][j] = v
    return tuple(tuple(r) for r in rows)


_HEALTH_VAR1 = _modified(_HEALTH, {(1, 2): 56, (2, 1): 30})
_HEALTH_VAR2 = _modified(_HEALTH, {(2, 3): 19, (3, 2): 0})


def _square(ident, table, provenance):
    return Fixture(ident, np.asarray(table, dtype=np.int64).ravel(), provenance, table, "square")


def _triangle(ident, table, provenance):
    return Fixture(ident, flatten_triangle(table), provenance, table, "triangle")


FIXTURES = {
    "rutherford": Fixture(
        "rutherford",
        np.asarray(_RUTHERFORD, dtype=np.int64),
        "Rutherford, Geiger & Bateman (1910): alpha particles from polonium in 2608 intervals of 7.5 s; "
        "bin k holds intervals with k-1 particles",
    ),
    "yeast": Fixture(
        "yeast",
        np.asarray(_YEAST, dtype=np.int64),
        "Student (1907), Biometrika 5: yeast cells in 400 haemacytometer squares; bin k holds squares with k-1 cells",
    ),
    "rhesus": _triangle(
        "rhesus", _RHESUS, "Guo & Thompson (1992), Biometrics 48, Fig. 3: pairs of Rhesus haplotypes, 8297 individuals"
    ),
    "antigen": _triangle(
        "antigen", _ANTIGEN, "Guo & Thompson (1992), Biometrics 48, Fig. 2: antigen genotypes, 45 individuals"
    ),
    "health": _square(
        "health", _HEALTH, "Erosheva, Walton & Takeuchi (2007), Med. Care 45, Table 4: self-rated health of matched pairs"
    ),
    "health-var1": _square("health-var1", _HEALTH_VAR1, "health table with cells (2,3) 43->56 and (3,2) 43->30"),
    "health-var2": _square("health-var2", _HEALTH_VAR2, "health table with cells (3,4) 11->19 and (4,3) 8->0"),
}


def fixture(ident):
    try:
        return FIXTURES[ident]
    except KeyError:
        raise KeyError(f"unknown fixture {ident!r}; available: {', '.join(FIXTURES)}") from None


def truncate(counts, n):
    """Keep bins ``1..n`` only; draws in later bins are discarded."""
    c = np.asarray(counts)
    if not 2 <= n <= c.size:
        raise ValueError(f"n must lie in 2..{c.size}")
    return c[:n].copy()


def _parse_int(token, where):
    try:
        value = int(token)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: {token!r} is not an integer") from None
    if isinstance(token, float) and token != value:
        raise ParseError(f"{where}: {token!r} is not an integer")
    if isinstance(token, bool):
        raise ParseError(f"{where}: {token!r} is not an integer")
    if value < 0:
        raise ParseError(f"{where}: negative count {value}")
    return value


def parse_text(text):
    """Whitespace/newline separated nonnegative integers."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for token in line.split():
            out.append(_parse_int(token, f"line {lineno}"))
    if not out:
        raise ParseError("no counts found")
    return np.asarray(out, dtype=np.int64)


def parse_json(text):
    """``{"bins": [...]}`` or ``{"table": [[...], ...]}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(obj, dict) or not ({"bins", "table"} & obj.keys()):
        raise ParseError('expected an object with a "bins" or "table" field')
    if "bins" in obj:
        bins = obj["bins"]
        if not isinstance(bins, list) or not bins:
            raise ParseError('"bins" must be a nonempty list')
        return np.asarray([_parse_int(v, f"bins[{i}]") for i, v in enumerate(bins)], dtype=np.int64)
    table = obj["table"]
    if not isinstance(table, list) or not table or not all(isinstance(r, list) for r in table):
        raise ParseError('"table" must be a nonempty list of rows')
    width = len(table[0])
    rows = []
    for i, row in enumerate(table, start=1):
        if len(row) != width:
            raise ParseError(f"table row {i} has {len(row)} entries, expected {width} (ragged table)")
        rows.append([_parse_int(v, f"table row {i}") for v in row])
    return np.asarray(rows, dtype=np.int64)


def load_counts(path, format=None):
    """Read counts from ``path``.

    ``format`` is ``"text"`` or ``"json"``; by default it is inferred from
    the ``.json`` suffix or a leading ``{``.  Returns a 1-D array for bins
    and a 2-D array for tables.
    """
    text = Path(path).read_text()
    if format is None:
        format = "json" if str(path).endswith(".json") or text.lstrip().startswith("{") else "text"
    if format == "text":
        return parse_text(text)
    if format == "json":
        return parse_json(text)
    raise ValueError(f"unknown format {format!r}")


def dump_counts(counts, path, format="text"):
    c = np.asarray(counts, dtype=np.int64)
    if format == "text":
        if c.ndim != 1:
            raise ValueError("the text format holds one-dimensional counts only")
        Path(path).write_text(" ".join(str(int(v)) for v in c) + "\n")
    elif format == "json":
        key = "bins" if c.ndim == 1 else "table"
        Path(path).write_text(json.dumps({key: c.tolist()}) + "\n")
    else:
        raise ValueError(f"unknown format {format!r}")
