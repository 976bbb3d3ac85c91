"""Testing whether event counts follow a Poisson distribution.

Two classical data sets are embedded: alpha-particle counts per interval
and yeast cells per haemacytometer square.  The Poisson mean is fitted to
each data set and every simulated data set is refitted the same way, so
the significance levels account for the estimated parameter.

Run:  python3 tutorials/01_poisson_counts.py
"""

from discretegof.datasets import fixture, truncate
from discretegof.engine import exact_test
from discretegof.families import TruncatedPoisson, family_from_id, pad_counts

SIMS = 20_000


def show(title, report):
    print(title)
    for r in report.results.values():
        print(f"  {r.kind.value:>4}  observed {r.observed:10.4g}  significance {r.significance:.4f} +/- {r.std_error:.4f}")


# Yeast cells: pad the observed bins with empty ones so the fitted Poisson
# distribution keeps essentially all of its mass inside the support.
yeast = fixture("yeast").counts
family = family_from_id("poisson:trunc", yeast.size)
report = exact_test(pad_counts(yeast, family.n), family, ["rms", "chi2", "g2", "ft"], sims=SIMS, seed=1)
print(f"fitted mean {report.fit.parameter.values[0]:.4f}")
show("yeast cells per square", report)

# Alpha particles: how do the levels move when only the first n bins are
# kept?  Draws in later bins are dropped, so m shrinks with n.
alpha = fixture("rutherford").counts
print("\nalpha particles, truncated at n bins")
print("   n     m     rms    chi2      g2      ft")
for n in (6, 8, 10, 12, 15):
    c = truncate(alpha, n)
    rep = exact_test(c, TruncatedPoisson(n), ["rms", "chi2", "g2", "ft"], sims=SIMS, seed=2)
    levels = "  ".join(f"{rep[k].significance:.3f}" for k in ("rms", "chi2", "g2", "ft"))
    print(f"{n:4d} {c.sum():5d}   {levels}")
