import math

import numpy as np
import pytest

from helixlab.errors import (
    DegenerateCurvatureError,
    InsufficientJetOrderError,
    UnitSpeedError,
)
from helixlab.frenet import frenet_at, frenet_series
from helixlab.config import Config

from conftest import make_spec


def test_helix_curvatures_and_signs(helix_spec):
    fs = frenet_series(helix_spec)
    kv = fs.curvature_values
    assert np.max(np.abs(kv[:, 0] - 0.4)) < 1e-12
    assert np.max(np.abs(kv[:, 1] - 0.2)) < 1e-12
    assert fs.signs == (1, 1, 1)
    assert fs.orthonormality_defect < 1e-12
    assert fs.closure_residual < 1e-12


def test_planar_circle_n2():
    spec = make_spec(("cos(s)", "sin(s)"), (1, 1), (0.0, 2.0 * math.pi))
    fs = frenet_series(spec)
    assert np.max(np.abs(fs.curvature_values[:, 0] - 1.0)) < 1e-12
    assert fs.signs == (1, 1)


def test_timelike_curve_signs(timelike_spec):
    fs = frenet_series(timelike_spec)
    assert fs.signs == (-1, 1, 1)
    kv = fs.curvature_values
    assert np.max(np.abs(kv[:, 0] - math.sqrt(5.0) / 4.0)) < 1e-12
    assert np.max(np.abs(kv[:, 1] - 0.25)) < 1e-12


def test_minkowski_helix_signs(minkowski_spec):
    fs = frenet_series(minkowski_spec)
    assert fs.signs == (1, -1, 1)
    kv = fs.curvature_values
    assert np.max(np.abs(kv[:, 0] - 0.4)) < 1e-10
    assert np.max(np.abs(kv[:, 1] - 0.2)) < 1e-10


def test_degenerate_curvature_planar_in_3d():
    # a plane curve has no second curvature: the recursion degenerates
    spec = make_spec(("cos(s)", "sin(s)", "0"), (1, 1, 1), (0.0, 3.0))
    with pytest.raises(DegenerateCurvatureError) as err:
        frenet_series(spec)
    assert err.value.level == 2


def test_null_acceleration_curve():
    # alpha = (s^2/2, s^2/2, s) in diag(-1,1,1) is unit-speed spacelike with
    # identically null acceleration (1, 1, 0): no proper frame exists
    from helixlab.errors import NullFrameVectorError

    spec = make_spec(("s^2/2", "s^2/2", "s"), (-1, 1, 1), (0.0, 2.0))
    with pytest.raises(NullFrameVectorError) as err:
        frenet_series(spec)
    assert err.value.level == 2


def test_sign_flip_detected():
    # fabricated curve jets whose tangent changes causal type between samples
    from helixlab.errors import SignFlipError
    from helixlab.frenet import frenet_stacks
    from helixlab.metric import MetricSignature

    grid = np.linspace(0.0, 1.0, 10)
    curve = np.zeros((10, 3, 8))
    curve[:5, 0, 1] = 1.0  # tangent (1,0,0): timelike under diag(-1,1,1)
    curve[5:, 1, 1] = 1.0  # tangent (0,1,0): spacelike
    with pytest.raises(SignFlipError) as err:
        frenet_stacks(curve, MetricSignature((-1, 1, 1)), grid, Config())
    assert err.value.level == 1


def test_non_unit_speed_rejected():
    spec = make_spec(("2*s", "0", "0"), (1, 1, 1), (0.0, 1.0))
    with pytest.raises(UnitSpeedError):
        frenet_series(spec)


def test_jet_order_floor(helix_spec):
    from helixlab.errors import SpecValidationError
    from helixlab.frenet import frenet_stacks
    from helixlab.jets import curve_jets_grid

    # the config gate rejects an order below the recursion's needs
    with pytest.raises(SpecValidationError):
        frenet_series(helix_spec, jet_order=4)
    # the recursion itself also guards against short jets
    grid = np.linspace(0.0, 1.0, 4)
    curve = curve_jets_grid(helix_spec, grid, 3)
    with pytest.raises(InsufficientJetOrderError):
        frenet_stacks(curve, helix_spec.metric, grid, Config())


def test_single_point_series(helix_spec):
    fd = frenet_at(helix_spec, 1.0)
    assert fd.s == 1.0
    assert np.allclose(fd.curvature_values, [0.4, 0.2], atol=1e-12)
    assert fd.signs == (1, 1, 1)
    # frame vectors carry usable jet orders after the recursion
    assert fd.frames[0].order >= fd.frames[2].order >= 1


def test_pseudo_orthonormality_invariant(helix_spec, minkowski_spec, timelike_spec):
    for spec in (helix_spec, minkowski_spec, timelike_spec):
        fs = frenet_series(spec)
        eta = spec.metric.eta_array
        frames = fs.frame_values
        gram = np.einsum("pin,n,pjn->pij", frames, eta, frames)
        target = np.diag(np.asarray(fs.signs, dtype=float))
        assert np.max(np.abs(gram - target)) < 1e-9


def test_frenet_equation_residuals(helix_spec):
    # value-level residual of every frame equation, including closure
    fs = frenet_series(helix_spec)
    n = fs.dimension
    kv = fs.curvature_values
    e = fs.signs
    for i in range(1, n):
        dVi = fs.frame_jets[i - 1][:, :, 1]
        rhs = np.zeros_like(dVi)
        if i > 1:
            rhs -= (e[i - 2] * e[i - 1]) * kv[:, i - 2 : i - 1] * fs.frame_jets[i - 2][:, :, 0]
        rhs += kv[:, i - 1 : i] * fs.frame_jets[i][:, :, 0]
        assert np.max(np.abs(dVi - rhs)) < 1e-8
    assert fs.closure_residual < 1e-8


def test_jet_consistency_with_finite_difference(helix_spec):
    # order-1 jet entries of V_i match central differences of the order-0 entries
    cfg = Config()
    h = 1e-4
    grid = np.linspace(1.0, 2.0, 21)
    fs = frenet_series(helix_spec, cfg, grid=grid)
    fs_plus = frenet_series(helix_spec, cfg, grid=grid + h)
    fs_minus = frenet_series(helix_spec, cfg, grid=grid - h)
    for i in range(fs.dimension):
        fd = (fs_plus.frame_jets[i][:, :, 0] - fs_minus.frame_jets[i][:, :, 0]) / (2 * h)
        assert np.max(np.abs(fs.frame_jets[i][:, :, 1] - fd)) < 1e-6


def test_isometry_equivariance(helix_spec):
    # rotate the (y, z) spacelike plane by an angle with cos = 0.6, sin = 0.8
    rotated = make_spec(
        (
            "2*cos(s/sqrt(5))",
            "0.6*(2*sin(s/sqrt(5))) - 0.8*(s/sqrt(5))",
            "0.8*(2*sin(s/sqrt(5))) + 0.6*(s/sqrt(5))",
        ),
        (1, 1, 1),
        helix_spec.domain,
    )
    fs = frenet_series(helix_spec)
    fr = frenet_series(rotated)
    assert np.max(np.abs(fs.curvature_values - fr.curvature_values)) < 1e-10
    rot = np.array([[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [0.0, 0.8, 0.6]])
    for i in range(3):
        mapped = fs.frame_jets[i][:, :, 0] @ rot.T
        assert np.max(np.abs(mapped - fr.frame_jets[i][:, :, 0])) < 1e-10


def test_coordinate_permutation_equivariance(minkowski_spec):
    # swapping the two spacelike coordinates preserves diag(-1,1,1)
    swapped = make_spec(
        ("2*cosh(s/sqrt(5))", "s/sqrt(5)", "2*sinh(s/sqrt(5))"),
        (-1, 1, 1),
        minkowski_spec.domain,
    )
    fs = frenet_series(minkowski_spec)
    fw = frenet_series(swapped)
    assert np.max(np.abs(fs.curvature_values - fw.curvature_values)) < 1e-10
    assert fs.signs == fw.signs
    for i in range(3):
        assert np.max(
            np.abs(fs.frame_jets[i][:, :, 0][:, [0, 2, 1]] - fw.frame_jets[i][:, :, 0])
        ) < 1e-10


def test_series_indexing(helix_spec):
    fs = frenet_series(helix_spec)
    fd = fs[7]
    assert fd.s == pytest.approx(fs.grid[7])
    assert np.allclose(fd.frame_values, fs.frame_values[7])
    assert len(fs) == helix_spec.samples
