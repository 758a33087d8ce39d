"""Numba-jitted kernels for the two hot paths: tape evaluation and RK4.

Mirrors ``np_kernels`` exactly (same guards, same status codes).  Kernels
are compiled lazily on first use and cached on disk.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..expressions import (
    OP_ADD,
    OP_CONST,
    OP_COS,
    OP_COSH,
    OP_DIV,
    OP_EXP,
    OP_MUL,
    OP_NEG,
    OP_POW,
    OP_SIN,
    OP_SINH,
    OP_SQRT,
    OP_SUB,
    OP_VAR,
)
from .codes import (
    DIV_FLOOR,
    STATUS_DIV_ZERO,
    STATUS_DRIFT,
    STATUS_NEG_SQRT,
    STATUS_NULL_FRAME,
    STATUS_OK,
    STATUS_SIGN_FLIP,
)

NAME = "numba"


@njit(cache=True)
def _mul_into(a, b, out, B, L):
    for k in range(L):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc += B[k, j] * (a[j] * b[k - j])
        out[k] = acc


@njit(cache=True)
def _div_into(a, b, out, B, L):
    b0 = b[0]
    out[0] = a[0] / b0
    for k in range(1, L):
        acc = a[k]
        for j in range(1, k + 1):
            acc -= B[k, j] * (b[j] * out[k - j])
        out[k] = acc / b0


@njit(cache=True)
def _sqrt_into(a, out, B, L):
    out[0] = np.sqrt(a[0])
    for k in range(1, L):
        acc = a[k]
        for j in range(1, k):
            acc -= B[k, j] * (out[j] * out[k - j])
        out[k] = acc / (2.0 * out[0])


@njit(cache=True)
def _exp_into(a, out, B, L):
    out[0] = np.exp(a[0])
    for k in range(1, L):
        acc = a[1] * out[k - 1]
        for j in range(1, k):
            acc += B[k - 1, j] * (a[j + 1] * out[k - 1 - j])
        out[k] = acc


@njit(cache=True)
def _sincos_into(a, s, c, B, L):
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, L):
        sa = a[1] * c[k - 1]
        ca = a[1] * s[k - 1]
        for j in range(1, k):
            sa += B[k - 1, j] * (a[j + 1] * c[k - 1 - j])
            ca += B[k - 1, j] * (a[j + 1] * s[k - 1 - j])
        s[k] = sa
        c[k] = -ca


@njit(cache=True)
def _sinhcosh_into(a, sh, ch, B, L):
    sh[0] = np.sinh(a[0])
    ch[0] = np.cosh(a[0])
    for k in range(1, L):
        sa = a[1] * ch[k - 1]
        ca = a[1] * sh[k - 1]
        for j in range(1, k):
            sa += B[k - 1, j] * (a[j + 1] * ch[k - 1 - j])
            ca += B[k - 1, j] * (a[j + 1] * sh[k - 1 - j])
        sh[k] = sa
        ch[k] = ca


@njit(cache=True)
def _eval_tape_kernel(ops, fargs, iargs, svals, L, B, max_depth):
    P = svals.shape[0]
    out = np.zeros((P, L))
    stack = np.zeros((max_depth, L))
    t1 = np.zeros(L)
    t2 = np.zeros(L)
    t3 = np.zeros(L)
    for p in range(P):
        sp = 0
        for t in range(ops.shape[0]):
            op = ops[t]
            if op == OP_CONST:
                for k in range(L):
                    stack[sp, k] = 0.0
                stack[sp, 0] = fargs[t]
                sp += 1
            elif op == OP_VAR:
                for k in range(L):
                    stack[sp, k] = 0.0
                stack[sp, 0] = svals[p]
                if L > 1:
                    stack[sp, 1] = 1.0
                sp += 1
            elif op == OP_ADD:
                sp -= 1
                for k in range(L):
                    stack[sp - 1, k] += stack[sp, k]
            elif op == OP_SUB:
                sp -= 1
                for k in range(L):
                    stack[sp - 1, k] -= stack[sp, k]
            elif op == OP_NEG:
                for k in range(L):
                    stack[sp - 1, k] = -stack[sp - 1, k]
            elif op == OP_MUL:
                sp -= 1
                _mul_into(stack[sp - 1], stack[sp], t1, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
            elif op == OP_DIV:
                sp -= 1
                if abs(stack[sp, 0]) < DIV_FLOOR:
                    return out, STATUS_DIV_ZERO, p
                _div_into(stack[sp - 1], stack[sp], t1, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
            elif op == OP_POW:
                q = iargs[t]
                if q < 0 and abs(stack[sp - 1, 0]) < DIV_FLOOR:
                    return out, STATUS_DIV_ZERO, p
                if q == 0:
                    for k in range(L):
                        stack[sp - 1, k] = 0.0
                    stack[sp - 1, 0] = 1.0
                else:
                    m = q if q > 0 else -q
                    for k in range(L):
                        t1[k] = stack[sp - 1, k]
                    for _ in range(m - 1):
                        _mul_into(t1, stack[sp - 1], t2, B, L)
                        for k in range(L):
                            t1[k] = t2[k]
                    if q < 0:
                        for k in range(L):
                            t2[k] = 0.0
                        t2[0] = 1.0
                        _div_into(t2, t1, t3, B, L)
                        for k in range(L):
                            t1[k] = t3[k]
                    for k in range(L):
                        stack[sp - 1, k] = t1[k]
            elif op == OP_SQRT:
                if stack[sp - 1, 0] < 0.0:
                    return out, STATUS_NEG_SQRT, p
                if L > 1 and 2.0 * np.sqrt(stack[sp - 1, 0]) < DIV_FLOOR:
                    return out, STATUS_DIV_ZERO, p
                _sqrt_into(stack[sp - 1], t1, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
            elif op == OP_SIN:
                _sincos_into(stack[sp - 1], t1, t2, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
            elif op == OP_COS:
                _sincos_into(stack[sp - 1], t1, t2, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t2[k]
            elif op == OP_SINH:
                _sinhcosh_into(stack[sp - 1], t1, t2, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
            elif op == OP_COSH:
                _sinhcosh_into(stack[sp - 1], t1, t2, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t2[k]
            elif op == OP_EXP:
                _exp_into(stack[sp - 1], t1, B, L)
                for k in range(L):
                    stack[sp - 1, k] = t1[k]
        for k in range(L):
            out[p, k] = stack[0, k]
    return out, STATUS_OK, -1


def eval_tape(ops, fargs, iargs, svals, order, max_depth):
    from ..jetmath import binomial_table

    out, status, bad = _eval_tape_kernel(
        ops, fargs, iargs, svals, order + 1, binomial_table(order), max(max_depth, 1)
    )
    if status != STATUS_OK:
        return None, status, bad
    return out, status, bad


@njit(cache=True)
def _rhs_into(y, kcol, signs, out):
    n = y.shape[1]
    for m in range(n):
        out[0, m] = y[1, m]
        out[1, m] = kcol[0] * y[2, m]
    for i in range(2, n):
        c = -signs[i - 2] * signs[i - 1] * kcol[i - 2]
        for m in range(n):
            out[i, m] = c * y[i - 1, m] + kcol[i - 1] * y[i + 1, m]
    c = -signs[n - 2] * signs[n - 1] * kcol[n - 2]
    for m in range(n):
        out[n, m] = c * y[n - 1, m]


@njit(cache=True)
def _orthonormalize(frame, eta, signs, null_tol, w):
    n = frame.shape[0]
    corr = 0.0
    for i in range(n):
        for m in range(n):
            w[m] = frame[i, m]
        for l in range(i):
            coef = 0.0
            for m in range(n):
                coef += eta[m] * w[m] * frame[l, m]
            coef *= signs[l]
            for m in range(n):
                w[m] -= coef * frame[l, m]
        q = 0.0
        eucl = 0.0
        for m in range(n):
            q += eta[m] * w[m] * w[m]
            eucl += w[m] * w[m]
        if eucl == 0.0 or abs(q) <= null_tol * eucl:
            return corr, STATUS_NULL_FRAME
        if (q > 0.0) != (signs[i] > 0):
            return corr, STATUS_SIGN_FLIP
        nf = np.sqrt(abs(q))
        d = 0.0
        for m in range(n):
            wm = w[m] / nf
            d += (wm - frame[i, m]) ** 2
            frame[i, m] = wm
        d = np.sqrt(d)
        if d > corr:
            corr = d
    return corr, STATUS_OK


@njit(cache=True)
def integrate_loop(y0, kgrid, eta, signs, h, null_tol, drift_tol):
    steps = (kgrid.shape[1] - 1) // 2
    rows = y0.shape[0]
    n = y0.shape[1]
    ys = np.zeros((steps + 1, rows, n))
    corrections = np.zeros(steps)
    y = y0.copy()
    yt = np.empty((rows, n))
    ka = np.empty((rows, n))
    kb = np.empty((rows, n))
    kc = np.empty((rows, n))
    kd = np.empty((rows, n))
    w = np.empty(n)
    for r in range(rows):
        for m in range(n):
            ys[0, r, m] = y0[r, m]
    for j in range(steps):
        _rhs_into(y, kgrid[:, 2 * j], signs, ka)
        for r in range(rows):
            for m in range(n):
                yt[r, m] = y[r, m] + (0.5 * h) * ka[r, m]
        _rhs_into(yt, kgrid[:, 2 * j + 1], signs, kb)
        for r in range(rows):
            for m in range(n):
                yt[r, m] = y[r, m] + (0.5 * h) * kb[r, m]
        _rhs_into(yt, kgrid[:, 2 * j + 1], signs, kc)
        for r in range(rows):
            for m in range(n):
                yt[r, m] = y[r, m] + h * kc[r, m]
        _rhs_into(yt, kgrid[:, 2 * j + 2], signs, kd)
        for r in range(rows):
            for m in range(n):
                y[r, m] = y[r, m] + (h / 6.0) * (
                    ka[r, m] + 2.0 * kb[r, m] + 2.0 * kc[r, m] + kd[r, m]
                )
        corr, status = _orthonormalize(y[1:], eta, signs, null_tol, w)
        corrections[j] = corr
        if status != STATUS_OK:
            return ys, corrections, status, j
        if corr > drift_tol:
            return ys, corrections, STATUS_DRIFT, j
        for r in range(rows):
            for m in range(n):
                ys[j + 1, r, m] = y[r, m]
    return ys, corrections, STATUS_OK, -1
