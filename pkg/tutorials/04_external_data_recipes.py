"""Recipes for external frequency data: ranked words, species, survey bins.

Such data are not embedded; read them with ``load_counts`` from a text file
of counts (one per bin) or a JSON object ``{"bins": [...]}``.  Synthetic
data stand in for the real files here so the script runs anywhere.

* Word frequencies: a power law whose exponent is fitted and whose bins
  are matched to ranks by sorting the counts (``zipf:free:perm``).
* Species abundances: a geometric law damped by ``1/sqrt(rank + offset)``
  with bins matched to ranks by sorting (``butterfly:<offset>``).
* Long-tailed survey categories: the largest ``h`` bins fitted freely and a
  power-law tail, with the tail aggregated into coarser bins for scoring
  (``head:<h>:zipf:rebin=<r>``).

Run:  python3 tutorials/04_external_data_recipes.py
"""

import tempfile
from pathlib import Path

import numpy as np

from discretegof.datasets import dump_counts, load_counts
from discretegof.engine import exact_test
from discretegof.families import family_from_id, power_law, truncated_geometric

rng = np.random.default_rng(0)
workdir = Path(tempfile.mkdtemp())

recipes = [
    ("words.txt", "zipf:free:perm", rng.permutation(rng.multinomial(3000, power_law(60, 1.1)))),
    ("species.txt", "butterfly:3", rng.permutation(rng.multinomial(800, truncated_geometric(40, 0.9)))),
    ("survey.json", "head:3:zipf:rebin=4", rng.multinomial(2000, power_law(30, 1.5))),
]

for name, family_id, synthetic in recipes:
    path = workdir / name
    dump_counts(synthetic, path, "json" if name.endswith(".json") else "text")

    counts = load_counts(path)
    family = family_from_id(family_id, counts.size)
    report = exact_test(counts, family, ["rms", "chi2", "g2", "ft"], sims=4000, seed=4)
    levels = "  ".join(f"{r.kind.value} {r.significance:.3f}" for r in report.results.values())
    print(f"{family_id:>20} on {name:<12} m={report.m:5d}: {levels}")
