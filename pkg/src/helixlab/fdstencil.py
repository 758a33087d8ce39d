"""Finite-difference weights and uniform-grid derivatives.

Weights come from Fornberg's recurrence, which is exact for any stencil,
so there are no hand-typed coefficient tables to get wrong.  The grid
derivative uses 5-point stencils (central in the interior, one-sided at
the two points on each edge), fourth-order accurate for first derivatives.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import SpecValidationError


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Weights w such that sum_i w[i] f(x[i]) approximates d^m f / dx^m at z."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if m >= n:
        raise SpecValidationError(f"derivative order {m} needs more than {n} points")
    c = np.zeros((n, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - z
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


@functools.lru_cache(maxsize=32)
def _first_derivative_weights(width: int) -> np.ndarray:
    """Rows of stencil weights for d/dx at offsets covering edges + interior.

    Returns (width, width): row r holds weights for evaluation point r of a
    length-``width`` window; row width//2 is the centered stencil.
    """
    rows = np.empty((width, width))
    for r in range(width):
        rows[r] = fornberg_weights(0.0, np.arange(width, dtype=np.float64) - r, 1)
    return rows


def grid_derivative(y: np.ndarray, h: float, order: int = 1, width: int = 5) -> np.ndarray:
    """d^order/ds^order of uniformly sampled data along axis 0.

    Composes first-derivative passes; each pass is O(h^(width-1)) accurate.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] < width:
        raise SpecValidationError(
            f"need at least {width} samples for the difference stencil, got {y.shape[0]}"
        )
    rows = _first_derivative_weights(width)
    half = width // 2
    out = y
    for _ in range(order):
        src = out
        out = np.empty_like(src)
        P = src.shape[0]
        centered = rows[half]
        acc = centered[0] * src[0 : P - width + 1]
        for i in range(1, width):
            acc = acc + centered[i] * src[i : P - width + 1 + i]
        out[half : P - half] = acc
        for r in range(half):
            out[r] = np.tensordot(rows[r], src[:width], axes=(0, 0))
            out[P - 1 - r] = np.tensordot(rows[width - 1 - r], src[P - width :], axes=(0, 0))
        out = out / h
    return out
