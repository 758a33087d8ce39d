"""Truncated-jet arithmetic on stacked arrays.

A jet of order m is stored as m+1 derivative values d^0 f .. d^m f along
the last axis (derivative values, not Taylor coefficients, so the product
rule carries binomial weights).  All functions broadcast over leading axes,
which the analysis pipeline uses to process a whole sample grid at once.

Binary operations require equal trailing lengths; use :func:`match` to
truncate a pair to the shorter usable order first.
"""

from __future__ import annotations

import functools

import numpy as np


@functools.lru_cache(maxsize=64)
def binomial_table(m: int) -> np.ndarray:
    """(m+1, m+1) table of C(k, j), exact in float64 for the orders used here."""
    b = np.zeros((m + 1, m + 1))
    for k in range(m + 1):
        b[k, 0] = 1.0
        for j in range(1, k + 1):
            b[k, j] = b[k - 1, j - 1] + b[k - 1, j]
    return b


def match(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Truncate two jet stacks to their common usable order."""
    L = min(a.shape[-1], b.shape[-1])
    return a[..., :L], b[..., :L]


def diff(a: np.ndarray) -> np.ndarray:
    """Jet of the derivative: shift left, order drops by one."""
    return np.ascontiguousarray(a[..., 1:])


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product jet via the general Leibniz rule."""
    L = a.shape[-1]
    B = binomial_table(L - 1)
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.empty(shape)
    for k in range(L):
        acc = a[..., 0] * b[..., k]
        for j in range(1, k + 1):
            acc = acc + B[k, j] * (a[..., j] * b[..., k - j])
        out[..., k] = acc
    return out


def div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quotient jet; caller guarantees the value part of b is away from zero."""
    L = a.shape[-1]
    B = binomial_table(L - 1)
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.empty(shape)
    b0 = b[..., 0]
    out[..., 0] = a[..., 0] / b0
    for k in range(1, L):
        acc = a[..., k]
        for j in range(1, k + 1):
            acc = acc - B[k, j] * (b[..., j] * out[..., k - j])
        out[..., k] = acc / b0
    return out


def sqrt_abs(a: np.ndarray) -> np.ndarray:
    """Jet of sqrt(|a|); valid where the value part is bounded away from 0.

    |a| is smooth there (the sign is locally constant), so the jet of |a| is
    sign(a_0) times the jet of a.
    """
    L = a.shape[-1]
    B = binomial_table(L - 1)
    sgn = np.where(a[..., 0] < 0.0, -1.0, 1.0)
    b = a * sgn[..., None]
    out = np.empty_like(b)
    r0 = np.sqrt(b[..., 0])
    out[..., 0] = r0
    for k in range(1, L):
        acc = b[..., k]
        for j in range(1, k):
            acc = acc - B[k, j] * (out[..., j] * out[..., k - j])
        out[..., k] = acc / (2.0 * r0)
    return out


def exp(a: np.ndarray) -> np.ndarray:
    L = a.shape[-1]
    B = binomial_table(L - 1)
    out = np.empty_like(a)
    out[..., 0] = np.exp(a[..., 0])
    for k in range(1, L):
        acc = a[..., 1] * out[..., k - 1]
        for j in range(1, k):
            acc = acc + B[k - 1, j] * (a[..., j + 1] * out[..., k - 1 - j])
        out[..., k] = acc
    return out


def sin_cos(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Jets of sin(a) and cos(a), computed in lockstep."""
    L = a.shape[-1]
    B = binomial_table(L - 1)
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[..., 0] = np.sin(a[..., 0])
    c[..., 0] = np.cos(a[..., 0])
    for k in range(1, L):
        sa = a[..., 1] * c[..., k - 1]
        ca = a[..., 1] * s[..., k - 1]
        for j in range(1, k):
            sa = sa + B[k - 1, j] * (a[..., j + 1] * c[..., k - 1 - j])
            ca = ca + B[k - 1, j] * (a[..., j + 1] * s[..., k - 1 - j])
        s[..., k] = sa
        c[..., k] = -ca
    return s, c


def sinh_cosh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    L = a.shape[-1]
    B = binomial_table(L - 1)
    sh = np.empty_like(a)
    ch = np.empty_like(a)
    sh[..., 0] = np.sinh(a[..., 0])
    ch[..., 0] = np.cosh(a[..., 0])
    for k in range(1, L):
        sa = a[..., 1] * ch[..., k - 1]
        ca = a[..., 1] * sh[..., k - 1]
        for j in range(1, k):
            sa = sa + B[k - 1, j] * (a[..., j + 1] * ch[..., k - 1 - j])
            ca = ca + B[k - 1, j] * (a[..., j + 1] * sh[..., k - 1 - j])
        sh[..., k] = sa
        ch[..., k] = ca
    return sh, ch


def const_like(a: np.ndarray, value: float) -> np.ndarray:
    out = np.zeros_like(a)
    out[..., 0] = value
    return out


def pow_int(a: np.ndarray, p: int) -> np.ndarray:
    """Integer power by repeated multiplication; p < 0 via the reciprocal."""
    if p == 0:
        return const_like(a, 1.0)
    q = abs(p)
    out = np.array(a, copy=True)
    for _ in range(q - 1):
        out = mul(out, a)
    if p < 0:
        out = div(const_like(out, 1.0), out)
    return out


def inner(u: np.ndarray, v: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Metric inner product of jet vectors: (..., n, L) x (..., n, L) -> (..., L).

    Accumulates coordinates left to right for reproducibility.
    """
    n = u.shape[-2]
    acc = eta[0] * mul(u[..., 0, :], v[..., 0, :])
    for j in range(1, n):
        acc = acc + eta[j] * mul(u[..., j, :], v[..., j, :])
    return acc
