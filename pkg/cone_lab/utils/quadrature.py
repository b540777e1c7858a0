"""
Gauss-Legendre quadrature helpers.

Composite tensor rules over rectangles split at breakpoints, with an error
estimate taken from the difference between order n and order 2n.
"""

from functools import lru_cache

import numpy as np
from scipy import special


@lru_cache(maxsize=64)
def gauss_legendre(order):
    """
    Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1].

    Args:
        order (int): Number of nodes

    Returns:
        tuple: (nodes, weights) as read-only arrays
    """
    nodes, weights = special.roots_legendre(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def composite_rule(breakpoints, order):
    """
    Composite rule on [breakpoints[0], breakpoints[-1]], one panel per interval.

    Args:
        breakpoints (array-like): Increasing panel boundaries
        order (int): Nodes per panel

    Returns:
        tuple: (nodes, weights) concatenated over panels
    """
    edges = np.asarray(breakpoints, dtype=float)
    t, w = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_2d(func, x_breaks, y_breaks, order):
    """
    Integrate func(x, y) over a rectangle with a composite tensor rule.

    Args:
        func (callable): Vectorized integrand taking meshgrid arrays
        x_breaks (array-like): Panel boundaries in x
        y_breaks (array-like): Panel boundaries in y
        order (int): Nodes per panel and direction

    Returns:
        float: Integral
    """
    x, wx = composite_rule(x_breaks, order)
    y, wy = composite_rule(y_breaks, order)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    return float(np.einsum("i,ij,j->", wx, func(xx, yy), wy))


def integrate_2d_with_error(func, x_breaks, y_breaks, order):
    """
    Integral at order 2n and the estimate |I(2n) - I(n)| of its error.

    Returns:
        tuple: (value, error)
    """
    coarse = integrate_2d(func, x_breaks, y_breaks, order)
    fine = integrate_2d(func, x_breaks, y_breaks, 2 * order)
    return fine, abs(fine - coarse)


def geometric_breaks(start, stop, panels, ratio=0.5):
    """
    Breakpoints on [start, stop] refined geometrically toward start.

    Used for integrands that are only Lipschitz at the lower end, such as
    polar integrals near the origin.
    """
    length = stop - start
    inner = [start + length * ratio ** k for k in range(panels, 0, -1)]
    return np.array([start] + inner + [stop])
