"""Families over cells of genotype triangles and square contingency tables."""

from __future__ import annotations

import numpy as np

from discretegof.families.base import FitError, ModelFamily, Parameter


def triangle_pairs(h):
    """Unordered pairs ``(j, k)`` with ``j >= k`` in row-major order (zero-based)."""
    return [(j, k) for j in range(h) for k in range(j + 1)]


def flatten_triangle(rows):
    """Flatten a lower-triangular table given as ragged rows ``[[c00], [c10, c11], ...]``."""
    out = []
    for j, row in enumerate(rows):
        if len(row) != j + 1:
            raise ValueError(f"row {j + 1} of a triangular table must have {j + 1} entries, got {len(row)}")
        out.extend(row)
    return np.asarray(out, dtype=np.int64)


class HardyWeinberg(ModelFamily):
    """Genotype frequencies under random mating with ``h`` alleles.

    Bins are the ``h(h+1)/2`` unordered pairs ``(j, k)``, ``j >= k``, in
    row-major order of the lower triangle.  ``p_jj = theta_j**2`` and
    ``p_jk = 2 theta_j theta_k``.  The maximum-likelihood allele frequencies
    are the allele proportions among the ``2m`` sampled alleles.
    """

    param_kind = "real"
    param_spec = "allele frequencies on the simplex"

    def __init__(self, h):
        h = int(h)
        if h < 2:
            raise ValueError("need at least two alleles")
        super().__init__(h * (h + 1) // 2)
        self.h = h
        self.name = f"hw:{h}"
        pairs = np.array(triangle_pairs(h))
        self._j, self._k = pairs[:, 0], pairs[:, 1]
        self._factor = np.where(self._j == self._k, 1.0, 2.0)
        # allele incidence: each genotype contributes two alleles
        inc = np.zeros((self.n, h))
        np.add.at(inc, (np.arange(self.n), self._j), 1.0)
        np.add.at(inc, (np.arange(self.n), self._k), 1.0)
        self._incidence = inc

    def _probs(self, theta):
        th = np.asarray(theta.values, dtype=np.float64)
        return self._factor * th[:, self._j] * th[:, self._k]

    def allele_counts(self, counts):
        return np.asarray(counts, dtype=np.float64) @ self._incidence

    def _estimate(self, counts):
        alleles = counts @ self._incidence
        theta = alleles / alleles.sum(axis=-1, keepdims=True)
        return Parameter("real", theta, None, np.any(theta == 0.0, axis=-1))

    def random_parameter(self, rng):
        return Parameter("real", rng.dirichlet(np.ones(self.h)))

    def table(self, counts):
        """Counts as an ``h x h`` lower-triangular array."""
        out = np.zeros((self.h, self.h), dtype=np.asarray(counts).dtype)
        out[self._j, self._k] = counts
        return out


class Symmetry(ModelFamily):
    """Square ``r x r`` tables whose cell probabilities are symmetric.

    Bins are the cells in row-major order.  The maximum-likelihood fit
    shares each off-diagonal pair's count equally between the two cells:
    ``(c_jk + c_kj) / (2m)``, and keeps ``c_jj / m`` on the diagonal.
    """

    param_kind = "real"
    param_spec = "symmetric cell probabilities (upper triangle incl. diagonal)"

    def __init__(self, r):
        r = int(r)
        if r < 2:
            raise ValueError("need at least a 2 x 2 table")
        super().__init__(r * r)
        self.r = r
        self.name = f"symmetry:{r}"
        iu = np.triu_indices(r)
        self._iu = iu
        # parameter index for every cell
        idx = np.zeros((r, r), dtype=np.int64)
        idx[iu] = np.arange(iu[0].size)
        idx = np.where(np.arange(r)[:, None] > np.arange(r)[None, :], idx.T, idx)
        self._cell_param = idx.ravel()
        self._transpose = np.arange(r * r).reshape(r, r).T.ravel()

    def _probs(self, theta):
        return np.asarray(theta.values, dtype=np.float64)[:, self._cell_param]

    def _estimate(self, counts):
        m = counts.sum(axis=-1, keepdims=True)
        if np.any(m <= 0):
            raise FitError("cannot fit the symmetry model to an empty table")
        sym = 0.5 * (counts + counts[:, self._transpose]) / m
        full = sym.reshape(-1, self.r, self.r)
        values = full[:, self._iu[0], self._iu[1]]
        return Parameter("real", values, None, np.zeros(counts.shape[0], bool))

    def random_parameter(self, rng):
        r = self.r
        cells = rng.dirichlet(np.ones(r * r)).reshape(r, r)
        sym = 0.5 * (cells + cells.T)
        return Parameter("real", sym[self._iu])
