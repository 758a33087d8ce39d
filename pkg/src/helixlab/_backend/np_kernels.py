"""Pure-numpy kernels: reference implementations of the two hot paths.

Semantics (including status codes and guard thresholds) are identical to
the numba kernels in ``nb_kernels``; the test suite compares the two.
"""

from __future__ import annotations

import numpy as np

from .. import expressions as ex
from .. import jetmath as jm
from .codes import (
    DIV_FLOOR,
    STATUS_DIV_ZERO,
    STATUS_DRIFT,
    STATUS_NEG_SQRT,
    STATUS_NULL_FRAME,
    STATUS_OK,
    STATUS_SIGN_FLIP,
)

NAME = "numpy"


def eval_tape(ops, fargs, iargs, svals, order, max_depth):
    """Evaluate a compiled expression tape as jets over a sample grid.

    Returns (out (P, order+1), status, bad_point_index).
    """
    P = svals.shape[0]
    L = order + 1
    stack: list[np.ndarray] = []
    for t in range(ops.shape[0]):
        op = ops[t]
        if op == ex.OP_CONST:
            row = np.zeros((P, L))
            row[:, 0] = fargs[t]
            stack.append(row)
        elif op == ex.OP_VAR:
            row = np.zeros((P, L))
            row[:, 0] = svals
            if L > 1:
                row[:, 1] = 1.0
            stack.append(row)
        elif op == ex.OP_ADD:
            b = stack.pop()
            stack[-1] = stack[-1] + b
        elif op == ex.OP_SUB:
            b = stack.pop()
            stack[-1] = stack[-1] - b
        elif op == ex.OP_NEG:
            stack[-1] = -stack[-1]
        elif op == ex.OP_MUL:
            b = stack.pop()
            stack[-1] = jm.mul(stack[-1], b)
        elif op == ex.OP_DIV:
            b = stack.pop()
            bad = np.abs(b[:, 0]) < DIV_FLOOR
            if bad.any():
                return None, STATUS_DIV_ZERO, int(np.argmax(bad))
            stack[-1] = jm.div(stack[-1], b)
        elif op == ex.OP_POW:
            p = int(iargs[t])
            a = stack[-1]
            if p < 0:
                bad = np.abs(a[:, 0]) < DIV_FLOOR
                if bad.any():
                    return None, STATUS_DIV_ZERO, int(np.argmax(bad))
            stack[-1] = jm.pow_int(a, p)
        elif op == ex.OP_SQRT:
            a = stack[-1]
            bad = a[:, 0] < 0.0
            if bad.any():
                return None, STATUS_NEG_SQRT, int(np.argmax(bad))
            if L > 1:
                bad = 2.0 * np.sqrt(a[:, 0]) < DIV_FLOOR
                if bad.any():
                    return None, STATUS_DIV_ZERO, int(np.argmax(bad))
            stack[-1] = jm.sqrt_abs(a)
        elif op == ex.OP_SIN:
            stack[-1] = jm.sin_cos(stack[-1])[0]
        elif op == ex.OP_COS:
            stack[-1] = jm.sin_cos(stack[-1])[1]
        elif op == ex.OP_SINH:
            stack[-1] = jm.sinh_cosh(stack[-1])[0]
        elif op == ex.OP_COSH:
            stack[-1] = jm.sinh_cosh(stack[-1])[1]
        elif op == ex.OP_EXP:
            stack[-1] = jm.exp(stack[-1])
        else:  # pragma: no cover - compiler emits only the opcodes above
            raise ValueError(f"unknown opcode {op}")
    return stack[0], STATUS_OK, -1


def _frenet_rhs(y, kcol, signs):
    """Right-hand side of the coupled curve + frame system at one s."""
    n = y.shape[1]
    out = np.empty_like(y)
    out[0] = y[1]
    out[1] = kcol[0] * y[2]
    for i in range(2, n):
        out[i] = -signs[i - 2] * signs[i - 1] * kcol[i - 2] * y[i - 1] + kcol[i - 1] * y[i + 1]
    out[n] = -signs[n - 2] * signs[n - 1] * kcol[n - 2] * y[n - 1]
    return out


def orthonormalize(frame, eta, signs, null_tol):
    """In-place indefinite Gram-Schmidt preserving the sign pattern.

    Returns (max Euclidean correction, status).
    """
    n = frame.shape[0]
    corr = 0.0
    for i in range(n):
        w = frame[i].copy()
        for l in range(i):
            coef = signs[l] * float(np.dot(eta * w, frame[l]))
            w = w - coef * frame[l]
        q = float(np.dot(eta * w, w))
        eucl = float(np.dot(w, w))
        if eucl == 0.0 or abs(q) <= null_tol * eucl:
            return corr, STATUS_NULL_FRAME
        if (q > 0.0) != (signs[i] > 0):
            return corr, STATUS_SIGN_FLIP
        w = w / np.sqrt(abs(q))
        d = w - frame[i]
        corr = max(corr, float(np.sqrt(np.dot(d, d))))
        frame[i] = w
    return corr, STATUS_OK


def integrate_loop(y0, kgrid, eta, signs, h, null_tol, drift_tol):
    """Fixed-step RK4 over the frame system with per-step re-orthonormalization.

    y0: (n+1, n) initial state (row 0 the point, rows 1..n the frame).
    kgrid: (n-1, 2*steps+1) curvature values on the half-step grid.
    Returns (states (steps+1, n+1, n), corrections (steps,), status, bad_step).
    """
    steps = (kgrid.shape[1] - 1) // 2
    ys = np.zeros((steps + 1,) + y0.shape)
    corrections = np.zeros(steps)
    ys[0] = y0
    y = y0.copy()
    for j in range(steps):
        a = _frenet_rhs(y, kgrid[:, 2 * j], signs)
        b = _frenet_rhs(y + (0.5 * h) * a, kgrid[:, 2 * j + 1], signs)
        c = _frenet_rhs(y + (0.5 * h) * b, kgrid[:, 2 * j + 1], signs)
        d = _frenet_rhs(y + h * c, kgrid[:, 2 * j + 2], signs)
        y = y + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
        corr, status = orthonormalize(y[1:], eta, signs, null_tol)
        corrections[j] = corr
        if status != STATUS_OK:
            return ys, corrections, status, j
        if corr > drift_tol:
            return ys, corrections, STATUS_DRIFT, j
        ys[j + 1] = y
    return ys, corrections, STATUS_OK, -1
