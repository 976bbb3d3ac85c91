"""Vectorized derivative-free maximization of unimodal 1-D functions."""

from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo, hi, tol=1e-10, maxiter=500):
    """Maximize ``f`` independently for every row of a batch.

    Parameters
    ----------
    f : callable
        Maps an array of trial points, shape ``(B,)``, to objective values of
        the same shape.  Row ``i`` of the trial array always belongs to
        problem ``i``.
    lo, hi : float or array_like
        Bracket per problem.  ``f`` must be unimodal on it.
    tol : float
        Width of the final bracket.

    Returns
    -------
    x : ndarray
        Location of the maximum, shape ``(B,)``.
    at_boundary : ndarray of bool
        Whether the maximum sits on (within ``tol`` of) the bracket ends.
    iterations : int
    """
    a = np.array(lo, dtype=np.float64, ndmin=1)
    b = np.array(hi, dtype=np.float64, ndmin=1)
    a, b = np.broadcast_arrays(a, b)
    a, b = a.copy(), b.copy()
    lo_, hi_ = a.copy(), b.copy()

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    active = (b - a) > tol
    while it < maxiter and active.any():
        it += 1
        # converged rows stay frozen, so each row's answer is independent of its batch
        left = (fc >= fd) & active
        right = ~(fc >= fd) & active
        # left: [a, d] with new interior c' ; right: [c, b] with new d'
        b = np.where(left, d, b)
        a = np.where(right, c, a)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        c, d, fc, fd = (
            np.where(left, new_c, np.where(right, d, c)),
            np.where(left, c, np.where(right, new_d, d)),
            np.where(left, fp, np.where(right, fd, fc)),
            np.where(left, fc, np.where(right, fp, fd)),
        )
        active = (b - a) > tol
    x = 0.5 * (a + b)
    # golden section cannot land exactly on an end; compare against the ends
    f_x, f_lo, f_hi = f(x), f(lo_), f(hi_)
    use_lo = (f_lo >= f_x) & (f_lo >= f_hi)
    use_hi = ~use_lo & (f_hi >= f_x)
    x = np.where(use_lo, lo_, np.where(use_hi, hi_, x))
    at_boundary = (x - lo_ <= tol) | (hi_ - x <= tol)
    return x, at_boundary, it
