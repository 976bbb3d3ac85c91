"""Hardy-Weinberg equilibrium and symmetry of square tables.

Genotype counts are tested against the Hardy-Weinberg model with allele
frequencies fitted by gene counting.  Matched-pair ratings are tested for
symmetry, with the fitted table the average of the table and its
transpose.  Altering two cells of the health table shows how the root-mean
-square statistic reacts to a single large discrepancy while the classical
statistics react to many small ones.

Run:  python3 tutorials/02_genotypes_and_symmetry.py
"""

from discretegof.datasets import fixture
from discretegof.engine import exact_test
from discretegof.families import HardyWeinberg, Symmetry

SIMS = 50_000
KINDS = ["rms", "chi2", "g2", "ft"]


def levels(report):
    return "  ".join(f"{k} {report[k].significance:.4f}" for k in KINDS)


for ident, alleles in (("rhesus", 9), ("antigen", 4)):
    f = fixture(ident)
    rep = exact_test(f.counts, HardyWeinberg(alleles), KINDS, sims=SIMS, seed=3)
    print(f"{ident:>8} (m={f.m}): {levels(rep)}")

print()
for ident in ("health", "health-var1", "health-var2"):
    f = fixture(ident)
    rep = exact_test(f.counts, Symmetry(5), KINDS, sims=SIMS, seed=5)
    print(f"{ident:>12}: {levels(rep)}")
