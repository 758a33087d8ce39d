import math

import numpy as np
import pytest

from helixlab.config import Config
from helixlab.errors import SpecValidationError, UnitSpeedError
from helixlab.fdstencil import fornberg_weights, grid_derivative
from helixlab.frenet import frenet_series
from helixlab.harmonic import harmonic_profile
from helixlab.sampled import (
    analyze_sampled,
    curvature_recovery_error,
    recover_curvatures,
    sampled_frenet_series,
)
from helixlab.synthesis import SampledCurve, integrate_frenet, negative_family, slant_family

def test_fornberg_known_stencils():
    w = fornberg_weights(0.0, np.arange(-2.0, 3.0), 1)
    assert np.allclose(w, [1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12])
    w = fornberg_weights(0.0, np.arange(0.0, 5.0), 1)
    assert np.allclose(w, [-25 / 12, 4.0, -3.0, 4 / 3, -1 / 4])
    w = fornberg_weights(0.0, np.arange(-1.0, 2.0), 2)
    assert np.allclose(w, [1.0, -2.0, 1.0])


def test_fornberg_polynomial_exactness():
    # a 5-point first-derivative stencil is exact on quartics
    x = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    w = fornberg_weights(0.0, x, 1)
    for power in range(5):
        exact = power * (0.0 ** (power - 1)) if power >= 1 else 0.0
        assert np.dot(w, x**power) == pytest.approx(exact, abs=1e-12)


def test_grid_derivative_fourth_order():
    errs = []
    for h in (1e-2, 5e-3):
        s = np.arange(0.0, 2.0, h)
        d = grid_derivative(np.sin(s), h, 1)
        errs.append(np.abs(d - np.cos(s)).max())
    assert errs[0] / errs[1] > 12.0


def test_grid_derivative_needs_enough_points():
    with pytest.raises(SpecValidationError):
        grid_derivative(np.zeros(4), 0.1, 1)


def test_curvature_recovery_constant_family():
    spec = slant_family(3, c1=0.4, c2=0.2)
    curve = integrate_frenet(spec)
    assert curvature_recovery_error(curve, spec) < 1e-10
    kvals = recover_curvatures(curve)
    assert np.max(np.abs(kvals[:, 0] - 0.4)) < 1e-10
    assert np.max(np.abs(kvals[:, 1] - 0.2)) < 1e-10


def test_sampled_series_checks_uniform_grid():
    spec = slant_family(3, c1=0.4, c2=0.2)
    curve = integrate_frenet(spec)
    bad = SampledCurve(
        s=np.r_[curve.s[:50], curve.s[60:]],
        points=np.r_[curve.points[:50], curve.points[60:]],
        frames=np.r_[curve.frames[:50], curve.frames[60:]],
        signs=curve.signs, metric=curve.metric, step=curve.step,
        corrections=curve.corrections,
    )
    with pytest.raises(SpecValidationError):
        sampled_frenet_series(bad)


def test_sampled_series_rejects_non_unit_frames():
    spec = slant_family(3, c1=0.4, c2=0.2)
    curve = integrate_frenet(spec)
    curve.frames[:, 0, :] *= 1.01
    with pytest.raises(UnitSpeedError):
        sampled_frenet_series(curve)


def test_sampled_matches_expression_path(helix_spec):
    # the same geometry through both derivative sources: the closed-form
    # circular helix vs the synthesized curve with identical curvatures
    fs_expr = frenet_series(helix_spec)
    hs_expr = harmonic_profile(fs_expr)
    spec = slant_family(3, c1=0.4, c2=0.2, domain=(0.0, 4.0 * math.pi))
    curve = integrate_frenet(spec)
    report = analyze_sampled(curve)
    assert np.max(np.abs(report.curvature_values[:, 0] - 0.4)) < 1e-6
    assert np.max(np.abs(report.curvature_values[:, 1] - 0.2)) < 1e-6
    assert np.max(np.abs(report.h_values[:, 1] - hs_expr.h_values[0, 1])) < 1e-6
    assert report.is_slant_helix


def test_sampled_analysis_grid_is_interior_and_decimated():
    spec = slant_family(4, c1=1.0, c2=1.0, amplitude=0.8, delta=0.2)
    curve = integrate_frenet(spec)
    report = analyze_sampled(curve, Config(samples=400))
    assert report.samples <= 400
    assert report.samples >= 16
    assert report.grid[0] > curve.s[0]
    assert report.grid[-1] < curve.s[-1]
    gaps = np.diff(report.grid)
    assert np.max(np.abs(gaps - gaps[0])) < 1e-12


def test_negative_family_parallel_residual_scale():
    report = analyze_sampled(integrate_frenet(negative_family(3, "ratio_linear")))
    assert report.axis_parallel_residual > 1e-2
    positive = analyze_sampled(integrate_frenet(slant_family(3, c1=0.4, c2=0.2)))
    assert positive.axis_parallel_residual < 1e-6
    # the separation spans at least two orders of magnitude
    assert report.axis_parallel_residual / max(positive.axis_parallel_residual, 1e-30) > 1e2


def test_w_curve_axis_not_parallel():
    report = analyze_sampled(integrate_frenet(negative_family(4, "w_curve")))
    assert not report.is_slant_helix
    # h_1 k_1 sets the drift scale of the assembled axis
    assert report.axis_parallel_residual > 0.1


def test_five_dimensional_constant_curvatures():
    # constant curvatures in R^5: h_2 = 0 but h_3 = k_2 h_1 / k_1 != 0, so
    # this IS a slant helix of the top frame vector
    from helixlab import expressions as ex
    from helixlab.harmonic import harmonic_profile, recursion_identity_residuals
    from helixlab.metric import MetricSignature
    from helixlab.synthesis import CurvatureSpec

    spec = CurvatureSpec(
        metric=MetricSignature.euclidean(5),
        curvature_exprs=tuple(
            ex.parse_expr(t) for t in ("0.7", "0.5", "0.6", "0.4")
        ),
        signs=(1, 1, 1, 1, 1),
        domain=(0.0, 5.0),
        step=1e-3,
        seed=11,
    )
    curve = integrate_frenet(spec)
    report = analyze_sampled(curve)
    assert report.is_slant_helix and report.verdicts_agree
    h1 = 0.4 / 0.6
    h3 = 0.5 * h1 / 0.7
    assert np.max(np.abs(report.h_values[:, 1] - h1)) < 1e-6
    assert np.max(np.abs(report.h_values[:, 2])) < 1e-6
    assert np.max(np.abs(report.h_values[:, 3] - h3)) < 1e-6
    assert abs(report.square_sum_stats.mean - (h1 * h1 + h3 * h3)) < 1e-6
    assert report.axis_parallel_residual < 1e-6
    # the interior recursion identity is exercised nontrivially at n=5
    identities = recursion_identity_residuals(harmonic_profile(sampled_frenet_series(curve)))
    assert "interior_2" in identities
    for vals in identities.values():
        assert np.max(np.abs(vals)) < 1e-8
