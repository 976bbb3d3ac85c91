"""Family constructors and the string-identifier catalog."""

from __future__ import annotations

import numpy as np

from discretegof.families.composite import HeadFitted
from discretegof.families.discrete import (
    RebinnedGeometric,
    TruncatedPoisson,
    WeightedGeometric,
    Zipf,
    butterfly_family,
)
from discretegof.families.shapes import fully_specified, uniform
from discretegof.families.structured import (
    IntegerSplit,
    Paired,
    ThreePoint,
    TwoPoint,
    step_permuted,
)
from discretegof.families.tables import HardyWeinberg, Symmetry

# support used for families whose tail is unbounded
UNBOUNDED_SUPPORT = 34_000


def zipf_family(n, exponent=None, permute=False, offset=0):
    """Power law over ``n`` bins; ``exponent=None`` fits it."""
    return Zipf(n, exponent=exponent, permute=permute, offset=offset)


def geometric_family(variant, n=None, head=None, support=UNBOUNDED_SUPPORT, rebin_at=None):
    """Geometric families.

    ``variant`` is ``"truncated"`` (``p_k`` proportional to ``t**k`` on
    ``n`` bins), ``"rebinned"`` (last of ``n`` bins holds the tail), or
    ``"tail_after_head"`` (``head`` sorted bins fitted exactly, then a
    geometric tail; the unbounded support is cut at ``support`` bins).
    """
    if variant == "truncated":
        return WeightedGeometric(n)
    if variant == "rebinned":
        return RebinnedGeometric(n)
    if variant == "tail_after_head":
        if head is None:
            raise ValueError("tail_after_head needs a head size")
        total = support if n is None else n
        return HeadFitted(RebinnedGeometric(total - head), head, permute=True, rebin_at=rebin_at)
    raise ValueError(f"unknown geometric variant {variant!r}")


def poisson_support(n):
    """Bins for a Poisson model of data observed on ``n`` bins.

    The fitted mean never exceeds ``n - 1``, so the mass beyond ``2n + 30``
    bins is negligible and truncating there matches an untruncated fit.
    """
    return 2 * int(n) + 30


def poisson_family(n, truncate_at=None):
    """Poisson model for data on ``n`` bins.

    By default the support extends well past the data (see
    :func:`poisson_support`); the data are then padded with empty bins.
    ``truncate_at`` truncates the model at exactly that many bins.
    """
    return TruncatedPoisson(poisson_support(n) if truncate_at is None else truncate_at)


def hardy_weinberg_family(h):
    return HardyWeinberg(h)


def symmetry_family(r):
    return Symmetry(r)


def structured_family(kind, n):
    kinds = {
        "two-point": TwoPoint,
        "three-point": ThreePoint,
        "split": IntegerSplit,
        "paired": Paired,
        "perm-step": step_permuted,
    }
    try:
        return kinds[kind](n)
    except KeyError:
        raise ValueError(f"unknown structured family {kind!r}; choose from {sorted(kinds)}") from None


def head_fitted_power_law(n, head_size, rebin_at=None):
    """Sorted bins; the ``head_size`` largest fitted exactly, a free power law after."""
    tail = Zipf(n - head_size, exponent=None, permute=False, offset=head_size)
    return HeadFitted(tail, head_size, permute=True, rebin_at=rebin_at)


FAMILY_IDS = (
    "uniform",
    "zipf:free",
    "zipf:free:perm",
    "zipf:<s>[:perm]",
    "geom:trunc",
    "geom:rebinned",
    "poisson",
    "poisson:trunc[:<bins>]",
    "hw:<alleles>",
    "symmetry:<side>",
    "butterfly[:<offset>]",
    "two-point",
    "three-point",
    "split",
    "paired",
    "perm-step",
    "head:<h>:zipf[:rebin=<r>]",
    "head:<h>:geom[:rebin=<r>]",
)


def _n_required(ident, n):
    if n is None:
        raise ValueError(f"family {ident!r} needs the number of bins")
    return int(n)


def pad_counts(counts, n):
    """Append empty bins so that ``counts`` covers ``n`` bins."""
    c = np.asarray(counts)
    if c.ndim != 1 or c.size > n:
        raise ValueError(f"cannot pad {c.shape} counts to {n} bins")
    return np.concatenate([c, np.zeros(n - c.size, dtype=c.dtype)])


def family_from_id(ident, n=None):
    """Build a family from a catalog identifier.

    ``n`` is the number of bins in the data; it is checked against families
    whose size is implied by the identifier (``hw:<h>``, ``symmetry:<r>``).
    Poisson families may have more bins than the data; pad the data with
    :func:`pad_counts`.

    >>> family_from_id("hw:2").n
    3
    """
    parts = ident.strip().lower().split(":")
    head = parts[0]
    if head == "uniform":
        return uniform(_n_required(ident, n))
    if head == "zipf":
        n = _n_required(ident, n)
        if len(parts) < 2:
            raise ValueError("zipf needs an exponent or 'free', e.g. 'zipf:free'")
        exponent = None if parts[1] == "free" else float(parts[1])
        permute = len(parts) > 2 and parts[2] == "perm"
        return Zipf(n, exponent=exponent, permute=permute)
    if head == "geom":
        n = _n_required(ident, n)
        variant = parts[1] if len(parts) > 1 else "trunc"
        if variant == "trunc":
            return WeightedGeometric(n)
        if variant == "rebinned":
            return RebinnedGeometric(n)
        raise ValueError(f"unknown geometric variant {variant!r}")
    if head == "poisson":
        if len(parts) > 1 and parts[1] != "trunc":
            raise ValueError(f"unknown Poisson variant {parts[1]!r}; use 'poisson' or 'poisson:trunc[:<bins>]'")
        if len(parts) > 2:
            bins = int(parts[2])
            if n is not None and n > bins:
                raise ValueError(f"{ident} has {bins} bins but the data have {n}")
            return TruncatedPoisson(bins)
        return poisson_family(_n_required(ident, n))
    if head in ("hw", "symmetry"):
        if len(parts) != 2:
            raise ValueError(f"{head} needs a size, e.g. '{head}:4'")
        size = int(parts[1])
        fam = HardyWeinberg(size) if head == "hw" else Symmetry(size)
        if n is not None and n != fam.n:
            raise ValueError(f"{ident} has {fam.n} bins but the data have {n}")
        return fam
    if head == "butterfly":
        offset = int(parts[1]) if len(parts) > 1 else 23
        return butterfly_family(_n_required(ident, n), offset=offset)
    if head in ("two-point", "three-point", "split", "paired", "perm-step"):
        return structured_family(head, _n_required(ident, n))
    if head == "head":
        n = _n_required(ident, n)
        if len(parts) < 3:
            raise ValueError("head families look like 'head:<h>:zipf' or 'head:<h>:geom'")
        h = int(parts[1])
        rebin = None
        for extra in parts[3:]:
            if extra.startswith("rebin="):
                rebin = int(extra.split("=", 1)[1])
            else:
                raise ValueError(f"unknown option {extra!r} in {ident!r}")
        if parts[2] == "zipf":
            return head_fitted_power_law(n, h, rebin_at=rebin)
        if parts[2] == "geom":
            return HeadFitted(RebinnedGeometric(n - h), h, permute=True, rebin_at=rebin)
        raise ValueError(f"unknown tail family {parts[2]!r}")
    raise ValueError(f"unknown family {ident!r}; known forms: {', '.join(FAMILY_IDS)}")
