"""Analysis of densely sampled curves via their stored frame history.

Synthesized curves carry exact-by-construction frames, so curvatures are
recovered from frame derivatives (fourth-order finite differences on the
uniform grid) rather than from coordinate jets: k_i = eps_i g(V_i', V_{i+1}).
Recovered curvatures are then packed into finite-difference jets and fed to
the same harmonic recursion, detectors and axis checks as the expression
path, which exercises a second derivative source against identical
invariants.

Grid policy: first derivatives are taken on the dense integration grid,
where the step is near the optimal differentiation spacing; the nested
derivatives that feed the harmonic recursion are taken on the decimated
analysis grid (about ``samples`` points), whose coarser spacing keeps
roundoff amplification of the deeper derivatives small.  Edge rows touched
by one-sided stencils are trimmed, so the analyzed interval is strictly
interior to the integration domain.
"""

from __future__ import annotations

import numpy as np

from .config import Config
from .errors import (
    DegenerateCurvatureError,
    FrenetClosureError,
    SpecValidationError,
    UnitSpeedError,
    UnsupportedDimensionError,
)
from .fdstencil import grid_derivative
from .frenet import FrenetSeries, _orthonormality_defect
from .harmonic import harmonic_profile
from .helix import HelixReport, assemble_report
from .jets import eval_values
from .synthesis import CurvatureSpec, SampledCurve


def _check_uniform(s: np.ndarray) -> float:
    if s.shape[0] < 5:
        raise SpecValidationError("sampled analysis needs at least 5 samples")
    gaps = np.diff(s)
    h = float(gaps[0])
    if h <= 0.0 or np.max(np.abs(gaps - h)) > 1e-9 * max(1.0, abs(h)):
        raise SpecValidationError("sampled analysis needs a uniform grid")
    return h


def _curvatures_from_frames(curve: SampledCurve, dframes: np.ndarray) -> np.ndarray:
    n = curve.dimension
    eta = curve.metric.eta_array
    kvals = np.empty((curve.frames.shape[0], n - 1))
    for i in range(1, n):
        kvals[:, i - 1] = curve.signs[i] * np.einsum(
            "pj,j,pj->p", dframes[:, i - 1, :], eta, curve.frames[:, i, :]
        )
    return kvals


def recover_curvatures(curve: SampledCurve) -> np.ndarray:
    """Curvature values (P, n-1) from frame derivatives:
    k_i = eps_i g(V_i', V_{i+1})."""
    h = _check_uniform(curve.s)
    return _curvatures_from_frames(curve, grid_derivative(curve.frames, h, 1))


def sampled_frenet_series(curve: SampledCurve, cfg: Config | None = None) -> FrenetSeries:
    """Frame series over a sampled curve, with FD-built curvature jets.

    Integrity checks (speed, orthonormality, curvature positivity, closure)
    run on the full dense history; the returned series lives on the trimmed
    decimated analysis grid.
    """
    cfg = cfg or Config()
    n = curve.dimension
    h = _check_uniform(curve.s)
    eta = curve.metric.eta_array

    v1 = curve.frames[:, 0, :]
    speed = np.abs(np.einsum("pj,j,pj->p", v1, eta, v1))
    deviation = float(np.max(np.abs(speed - 1.0)))
    if deviation > cfg.unit_speed_tol:
        raise UnitSpeedError(deviation, cfg.unit_speed_tol)

    defect = _orthonormality_defect(curve.frames, eta, curve.signs)

    dframes = grid_derivative(curve.frames, h, 1)
    kvals = _curvatures_from_frames(curve, dframes)
    small = kvals <= cfg.curvature_floor
    if small.any():
        p, i = np.unravel_index(int(np.argmax(small)), small.shape)
        raise DegenerateCurvatureError(curve.s[p], i + 1, kvals[p, i])

    # closure of the frame system, from stored frames alone
    r = dframes[:, n - 1, :] + (
        curve.signs[n - 2] * curve.signs[n - 1]
    ) * kvals[:, n - 2 : n - 1] * curve.frames[:, n - 2, :]
    res = np.sqrt(np.einsum("pj,pj->p", r, r))
    closure = float(np.max(res))
    if closure > cfg.residual_tol:
        raise FrenetClosureError(curve.s[int(np.argmax(res))], closure, cfg.residual_tol)

    # decimate to the analysis grid: skip the edge rows of the dense pass,
    # then select a uniform stride aiming at cfg.samples points
    P = curve.frames.shape[0]
    edge = 2
    span = P - 2 * edge
    if span < 16:
        raise SpecValidationError(f"{P} samples leave too few interior points")
    stride = max(1, -(-(span - 1) // max(cfg.samples - 1, 1)))
    idx = np.arange(edge, P - edge, stride)

    grid_a = curve.s[idx]
    frames_a = curve.frames[idx]
    dframes_a = dframes[idx]
    kvals_a = kvals[idx]
    h_a = float(stride) * h

    # curvature jets: nested differences on the analysis grid
    order = n - 1
    curvature_jets: list[np.ndarray] = []
    for i in range(n - 1):
        jet = np.empty((idx.shape[0], order + 1))
        jet[:, 0] = kvals_a[:, i]
        col = kvals_a[:, i]
        for d in range(1, order + 1):
            col = grid_derivative(col, h_a, 1)
            jet[:, d] = col
        curvature_jets.append(jet)

    frame_jets = [
        np.stack([frames_a[:, i, :], dframes_a[:, i, :]], axis=-1) for i in range(n)
    ]

    # drop rows whose nested derivatives touched one-sided stencils
    trim = 2 * (n - 1)
    if idx.shape[0] - 2 * trim < 16:
        raise SpecValidationError(
            f"analysis grid of {idx.shape[0]} points too small after edge trim"
        )
    keep = slice(trim, idx.shape[0] - trim)

    return FrenetSeries(
        grid=grid_a[keep],
        metric=curve.metric,
        signs=tuple(curve.signs),
        frame_jets=[v[keep] for v in frame_jets],
        curvature_jets=[k[keep] for k in curvature_jets],
        orthonormality_defect=defect,
        closure_residual=closure,
        source={"kind": "sampled", "speed_deviation": deviation,
                "analysis_step": h_a, **curve.source},
    )


def analyze_sampled(
    curve: SampledCurve, cfg: Config | None = None, coupling: float = 1.0
) -> HelixReport:
    """Full detection pipeline on a sampled curve (frames path)."""
    cfg = cfg or Config()
    if curve.dimension < 3:
        raise UnsupportedDimensionError(
            f"helix analysis needs dimension >= 3, got {curve.dimension}"
        )
    fs = sampled_frenet_series(curve, cfg)
    hs = harmonic_profile(fs)
    return assemble_report(
        fs, hs, cfg,
        source="sampled",
        speed_deviation=float(fs.source.get("speed_deviation", 0.0)),
        coupling=coupling,
    )


def curvature_recovery_error(curve: SampledCurve, spec: CurvatureSpec) -> float:
    """Max relative error of recovered curvatures against prescribed ones."""
    kvals = recover_curvatures(curve)
    worst = 0.0
    for i, expr in enumerate(spec.curvature_exprs):
        truth = eval_values(expr, curve.s)
        err = np.max(np.abs(kvals[:, i] - truth) / np.maximum(np.abs(truth), 1e-30))
        worst = max(worst, float(err))
    return worst
