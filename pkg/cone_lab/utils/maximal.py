"""
Discrete noncentered maximal functions on uniform grids.

For a function sampled on cells of a uniform grid, the noncentered maximal
function at cell c is the largest average of g over runs of cells that
contain c. The exact brute force is quadratic; the threshold set {g* > level}
is computed in linear time from prefix sums.
"""

import numpy as np


def noncentered_maximal(g):
    """
    Exact discrete noncentered maximal function.

    g*(c) = max over a <= c <= b of mean(g[a..b]).

    Args:
        g (array-like): Cell values, shape (M,)

    Returns:
        numpy.ndarray: g*, shape (M,)
    """
    g = np.asarray(g, dtype=float)
    m = g.size
    prefix = np.concatenate([[0.0], np.cumsum(g)])
    result = np.full(m, -np.inf)
    for a in range(m):
        # averages over [a, b] for every b >= a
        b = np.arange(a, m)
        means = (prefix[b + 1] - prefix[a]) / (b - a + 1)
        # cell c in [a, b] sees the best run starting at a and ending at or after c
        best_from = np.maximum.accumulate(means[::-1])[::-1]
        result[a:] = np.maximum(result[a:], best_from)
    return result


def threshold_set(g, level):
    """
    Cells where the noncentered maximal function exceeds a level.

    A run [a, b] has mean above level exactly when P[b+1] > P[a] for the
    prefix sums P of g - level, so cell c is in the set iff
    max(P[c+1:]) > min(P[:c+1]).

    Args:
        g (array-like): Cell values, shape (M,)
        level (float): Threshold

    Returns:
        numpy.ndarray: Boolean mask, shape (M,)
    """
    g = np.asarray(g, dtype=float)
    prefix = np.concatenate([[0.0], np.cumsum(g - level)])
    min_left = np.minimum.accumulate(prefix[:-1])
    max_right = np.maximum.accumulate(prefix[::-1])[::-1][1:]
    return max_right > min_left


def runs(mask):
    """
    Maximal runs of True cells.

    Args:
        mask (array-like): Boolean mask

    Returns:
        list: (first, last) cell indices of each run, in order
    """
    mask = np.asarray(mask, dtype=bool)
    padded = np.concatenate([[False], mask, [False]])
    changes = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(start), int(stop) - 1) for start, stop in zip(changes[::2], changes[1::2])]
