"""The numba kernels and the pure-numpy fallback must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from helixlab import _backend
from helixlab import expressions as ex
from helixlab._backend.codes import STATUS_DIV_ZERO, STATUS_NEG_SQRT, STATUS_OK

EXPRS = [
    "2*cos(s/sqrt(5))",
    "exp(sin(s))/(2+cos(s)) - sinh(s/3)*s^2",
    "sqrt(4+s^2)*cosh(s/4)",
    "(1+s^2)^-2 + s^3/(5+s)",
    "-s + 3.5e-1*sin(2*s)*cos(3*s)",
]


@pytest.mark.parametrize("text", EXPRS)
def test_tape_eval_matches(text):
    tape = ex.compile_tape(ex.parse_expr(text))
    svals = np.linspace(-1.5, 2.5, 37)
    results = {}
    for name in ("numpy", "numba"):
        kern = _backend.get_backend(name)
        out, status, bad = kern.eval_tape(
            tape.ops, tape.fargs, tape.iargs, svals, 8, tape.max_depth
        )
        assert status == STATUS_OK
        results[name] = out
    scale = np.maximum(1.0, np.abs(results["numpy"]))
    assert np.max(np.abs(results["numpy"] - results["numba"]) / scale) < 1e-13


@pytest.mark.parametrize("name", ["numpy", "numba"])
def test_tape_eval_error_statuses(name):
    kern = _backend.get_backend(name)
    svals = np.array([1.0, 0.0, 2.0])

    tape = ex.compile_tape(ex.parse_expr("1/s"))
    _, status, bad = kern.eval_tape(tape.ops, tape.fargs, tape.iargs, svals, 2, tape.max_depth)
    assert status == STATUS_DIV_ZERO and bad == 1

    tape = ex.compile_tape(ex.parse_expr("sqrt(s-3)"))
    _, status, bad = kern.eval_tape(tape.ops, tape.fargs, tape.iargs, svals, 0, tape.max_depth)
    assert status == STATUS_NEG_SQRT and bad == 0


def test_integrate_loop_matches():
    # circular helix system, n=3
    n = 3
    steps = 500
    h = 4.0 / steps
    kgrid = np.empty((2, 2 * steps + 1))
    kgrid[0] = 0.4
    kgrid[1] = 0.2
    y0 = np.zeros((n + 1, n))
    y0[1:] = np.eye(n)
    eta = np.ones(n)
    signs = np.ones(n, dtype=np.int64)
    outs = {}
    for name in ("numpy", "numba"):
        kern = _backend.get_backend(name)
        ys, corr, status, bad = kern.integrate_loop(y0, kgrid, eta, signs, h, 1e-9, 1e-6)
        assert status == STATUS_OK
        outs[name] = (ys, corr)
    assert np.max(np.abs(outs["numpy"][0] - outs["numba"][0])) < 1e-12
    assert np.max(np.abs(outs["numpy"][1] - outs["numba"][1])) < 1e-14


def test_orthonormalize_agrees_minkowski():
    rng = np.random.default_rng(7)
    eta = np.array([-1.0, 1.0, 1.0])
    signs = np.array([1, -1, 1], dtype=np.int64)
    base = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    frame = base + 1e-8 * rng.standard_normal((3, 3))
    frames = {}
    for name in ("numpy", "numba"):
        kern = _backend.get_backend(name)
        f = frame.copy()
        if name == "numpy":
            corr, status = kern.orthonormalize(f, eta, signs, 1e-9)
        else:
            corr, status = kern._orthonormalize(f, eta, signs, 1e-9, np.empty(3))
        assert status == STATUS_OK
        assert corr < 1e-7
        frames[name] = f
    assert np.max(np.abs(frames["numpy"] - frames["numba"])) < 1e-14
    gram = np.einsum("in,n,jn->ij", frames["numpy"], eta, frames["numpy"])
    assert np.max(np.abs(gram - np.diag(signs.astype(float)))) < 1e-14


def _active_name_in_subprocess(env_value: str | None) -> str:
    env = dict(os.environ)
    env.pop("HELIXLAB_BACKEND", None)
    if env_value is not None:
        env["HELIXLAB_BACKEND"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from helixlab import _backend; print(_backend.active_name())"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_backend():
    assert _active_name_in_subprocess("numpy") == "numpy"
    assert _active_name_in_subprocess("numba") == "numba"
    assert _active_name_in_subprocess(None) in ("numpy", "numba")


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _backend.get_backend("fortran")
