import math

import numpy as np
import pytest

from helixlab import _backend
from helixlab import expressions as ex
from helixlab.jets import CurveSpec
from helixlab.metric import MetricSignature

HELIX_COORDS = ("2*cos(s/sqrt(5))", "2*sin(s/sqrt(5))", "s/sqrt(5)")
MINKOWSKI_COORDS = ("2*cosh(s/sqrt(5))", "2*sinh(s/sqrt(5))", "s/sqrt(5)")
TIMELIKE_COORDS = ("sqrt(5)*sinh(s/2)", "sqrt(5)*cosh(s/2)", "s/2")


def make_spec(coords, eta, domain, samples=400) -> CurveSpec:
    return CurveSpec(
        metric=MetricSignature(tuple(eta)),
        coordinates=tuple(ex.parse_expr(t) for t in coords),
        domain=domain,
        samples=samples,
        coordinate_texts=tuple(coords),
    )


@pytest.fixture
def helix_spec() -> CurveSpec:
    """Unit-speed circular helix, radius 2 pitch 1: k = (0.4, 0.2)."""
    return make_spec(HELIX_COORDS, (1, 1, 1), (0.0, 4.0 * math.pi))


@pytest.fixture
def minkowski_spec() -> CurveSpec:
    """Spacelike hyperbolic helix in diag(-1,1,1): k = (0.4, 0.2), signs (+,-,+)."""
    return make_spec(MINKOWSKI_COORDS, (-1, 1, 1), (0.0, 6.0))


@pytest.fixture
def timelike_spec() -> CurveSpec:
    """Timelike curve in diag(-1,1,1): k = (sqrt(5)/4, 1/4), signs (-,+,+)."""
    return make_spec(TIMELIKE_COORDS, (-1, 1, 1), (0.0, 3.0))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile/load the jitted kernels once so timed tests measure steady state."""
    svals = np.linspace(0.0, 1.0, 4)
    tape = ex.compile_tape(ex.parse_expr("sin(s)/(2+s)"))
    y0 = np.zeros((3, 2))
    y0[1] = (1.0, 0.0)
    y0[2] = (0.0, 1.0)
    kgrid = np.ones((1, 5))
    eta = np.ones(2)
    signs = np.ones(2, dtype=np.int64)
    for name in ("numpy", "numba"):
        kern = _backend.get_backend(name)
        kern.eval_tape(tape.ops, tape.fargs, tape.iargs, svals, 4, tape.max_depth)
        kern.integrate_loop(y0, kgrid, eta, signs, 0.01, 1e-9, 1e-6)
    yield


@pytest.fixture
def force_backend():
    """Switch the active kernel backend inside a test, restoring it after."""
    previous = _backend.active()

    def _switch(name: str):
        return _backend.use_backend(name)

    yield _switch
    _backend._ACTIVE = previous
