"""Slant-helix detection, axis reconstruction and identity verification.

A curve is a slant helix of its top frame vector when that vector keeps a
constant nonzero inner product with a parallel axis field X.  Two
equivalent numerical criteria decide this from the harmonic curvatures:

* square-sum criterion: the signed sum of squared harmonic curvatures is a
  nonzero constant and the top harmonic curvature stays away from zero;
* derivative-rule criterion: h'_{n-2} = k_1 h_{n-3} with the same
  nonvanishing condition.

Verdicts are tri-state internally: a gate whose measured value sits within
a factor of ten of its threshold is flagged inconclusive, since the
underlying dichotomy has no numerical margin of its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .config import Config
from .errors import SpecValidationError, UnsupportedDimensionError
from .frenet import FrenetData, FrenetSeries, frenet_series
from .harmonic import (
    HarmonicProfile,
    HarmonicSeries,
    derivative_rule_residual,
    harmonic_profile,
    square_sum,
)
from .jets import CurveSpec
from .metric import MetricSignature


@dataclass(frozen=True)
class ConstancyStats:
    """Summary of a sampled scalar; quantifies 'nonzero constant'."""

    mean: float
    min: float
    max: float
    rel_variation: float  # (max - min) / max(1, |mean|)

    @classmethod
    def from_samples(cls, x: np.ndarray) -> "ConstancyStats":
        mean = float(np.mean(x))
        lo = float(np.min(x))
        hi = float(np.max(x))
        return cls(mean=mean, min=lo, max=hi,
                   rel_variation=(hi - lo) / max(1.0, abs(mean)))

    def to_dict(self) -> dict:
        return {"mean": self.mean, "min": self.min, "max": self.max,
                "rel_variation": self.rel_variation}


@dataclass(frozen=True)
class DetectorResult:
    verdict: bool
    confident: bool
    square_sum_stats: ConstancyStats
    min_abs_h_top: float


def _gate(value: float, threshold: float, mode: str) -> tuple[bool, bool]:
    """(passes, confident): confident means outside the 10x threshold band."""
    ok = value < threshold if mode == "below" else value > threshold
    confident = not (threshold / 10.0 <= value <= threshold * 10.0)
    return ok, confident


def detect_by_square_sum(hs: HarmonicSeries, cfg: Config | None = None) -> DetectorResult:
    """Constancy criterion: the signed square sum is a nonzero constant and
    the top harmonic curvature stays above its floor."""
    cfg = cfg or Config()
    if len(hs) < 16:
        raise SpecValidationError(f"detection needs >= 16 samples, got {len(hs)}")
    stats = ConstancyStats.from_samples(square_sum(hs))
    h_top = float(np.min(np.abs(hs.h_jets[hs.dimension - 2][:, 0])))
    g1 = _gate(stats.rel_variation, cfg.const_tol, "below")
    g2 = _gate(abs(stats.mean), cfg.sum_floor, "above")
    g3 = _gate(h_top, cfg.h_top_floor, "above")
    return DetectorResult(
        verdict=g1[0] and g2[0] and g3[0],
        confident=g1[1] and g2[1] and g3[1],
        square_sum_stats=stats,
        min_abs_h_top=h_top,
    )


def detect_by_derivative_rule(hs: HarmonicSeries, cfg: Config | None = None) -> DetectorResult:
    """Derivative-rule criterion: h'_{n-2} - k_1 h_{n-3} vanishes (relative
    to the scale of k_1 h_{n-3}) and the top harmonic curvature is nonzero."""
    cfg = cfg or Config()
    if len(hs) < 16:
        raise SpecValidationError(f"detection needs >= 16 samples, got {len(hs)}")
    n = hs.dimension
    residual = float(np.max(np.abs(derivative_rule_residual(hs))))
    scale = float(np.max(np.abs(hs.k1_values * hs.h_jets[n - 3][:, 0])))
    h_top = float(np.min(np.abs(hs.h_jets[n - 2][:, 0])))
    g1 = _gate(residual, cfg.const_tol * max(1.0, scale), "below")
    g2 = _gate(h_top, cfg.h_top_floor, "above")
    return DetectorResult(
        verdict=g1[0] and g2[0],
        confident=g1[1] and g2[1],
        square_sum_stats=ConstancyStats.from_samples(square_sum(hs)),
        min_abs_h_top=h_top,
    )


def axis_series(fs: FrenetSeries, hs: HarmonicSeries, coupling: float = 1.0) -> np.ndarray:
    """Axis vector at every sample: (P, n).

    X = coupling * ( sum_{i=1}^{n-2} h_i eps_{n-(i+2)} V_{n-(i+1)}
                     + eps_{n-1} V_n ),
    where the coupling plays the constant inner product g(X, V_n).
    """
    if coupling == 0.0:
        raise SpecValidationError("axis coupling must be nonzero")
    n = fs.dimension
    e = fs.signs
    frames = fs.frame_values  # (P, n, n)
    acc = float(e[n - 1]) * frames[:, n - 1, :]
    for i in range(1, n - 1):
        hvals = hs.h_jets[i][:, 0]
        acc = acc + (e[n - i - 2] * hvals)[:, None] * frames[:, n - i - 2, :]
    return coupling * acc


def axis_from_frame(frame: FrenetData, profile: HarmonicProfile, coupling: float = 1.0) -> np.ndarray:
    """Axis at a single sample, from frame values and harmonic curvatures."""
    if coupling == 0.0:
        raise SpecValidationError("axis coupling must be nonzero")
    n = frame.dimension
    e = frame.signs
    frames = frame.frame_values
    acc = float(e[n - 1]) * frames[n - 1]
    for i in range(1, n - 1):
        acc = acc + e[n - i - 2] * profile.h[i].value * frames[n - i - 2]
    return coupling * acc


def verify_axis_parallel(axis: np.ndarray, ds: float) -> float:
    """Parallelism defect: max Euclidean norm of the central-difference
    derivative of the axis over interior samples (flat space, so the
    covariant derivative is the plain derivative)."""
    if axis.shape[0] < 3:
        raise SpecValidationError("parallelism check needs >= 3 samples")
    d = (axis[2:] - axis[:-2]) / (2.0 * ds)
    return float(np.max(np.sqrt(np.einsum("pj,pj->p", d, d))))


def axis_projection_residuals(
    fs: FrenetSeries, hs: HarmonicSeries, axis: np.ndarray
) -> tuple[tuple[float, ...], float, ConstancyStats]:
    """Projection identities of the axis onto the frame.

    Returns (per-index residuals, next-to-top residual, inner stats):
    for i = 0..n-2 the max over the grid of
    |g(V_{n-(i+1)}, X) - h_i g(V_n, X)|, then max |g(V_{n-1}, X)| (which the
    identities force to vanish), then constancy stats of g(V_n, X).
    """
    n = fs.dimension
    eta = fs.metric.eta_array
    frames = fs.frame_values
    gvx = np.einsum("pij,j,pj->pi", frames, eta, axis)  # g(V_{i+1}, X)
    g_n = gvx[:, n - 1]
    residuals = []
    for i in range(0, n - 1):
        h_i = hs.h_jets[i][:, 0]
        residuals.append(float(np.max(np.abs(gvx[:, n - i - 2] - h_i * g_n))))
    vn1 = float(np.max(np.abs(gvx[:, n - 2])))
    return tuple(residuals), vn1, ConstancyStats.from_samples(g_n)


def axis_norm_residual(
    hs: HarmonicSeries, axis: np.ndarray, metric: MetricSignature, coupling: float = 1.0
) -> float:
    """Residual of the algebraic identity
    g(X,X) = coupling^2 (square_sum + eps_{n-1}); holds whenever the axis is
    assembled from the frame, helix or not."""
    n = hs.dimension
    eta = metric.eta_array
    gxx = np.einsum("pj,j,pj->p", axis, eta, axis)
    expected = coupling * coupling * (square_sum(hs) + hs.signs[n - 1])
    return float(np.max(np.abs(gxx - expected)))


@dataclass
class HelixReport:
    """Full verdict and verification record for one analyzed curve."""

    dimension: int
    metric: tuple[int, ...]
    signs: tuple[int, ...]
    domain: tuple[float, float]
    samples: int
    source: str                      # "expression" | "sampled"
    backend: str
    verdict_square_sum: bool
    verdict_derivative_rule: bool
    verdicts_agree: bool
    is_slant_helix: bool
    confidence: str                  # "confident" | "inconclusive"
    square_sum_stats: ConstancyStats
    min_abs_h_top: float
    rule_residual_max: float
    axis_coupling: float
    axis_parallel_residual: float
    axis_inner_stats: ConstancyStats
    axis_projection_residuals: tuple[float, ...]
    vn1_residual: float
    axis_norm_residual: float
    frame_orthonormality_defect: float
    closure_residual: float
    speed_deviation: float
    grid: np.ndarray = field(repr=False)
    axis: np.ndarray = field(repr=False)
    curvature_values: np.ndarray = field(repr=False)
    h_values: np.ndarray = field(repr=False)
    square_sum_values: np.ndarray = field(repr=False)
    rule_residual_values: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "dimension": self.dimension,
            "metric": list(self.metric),
            "signs": list(self.signs),
            "domain": [self.domain[0], self.domain[1]],
            "samples": self.samples,
            "source": self.source,
            "backend": self.backend,
            "verdicts": {
                "square_sum": self.verdict_square_sum,
                "derivative_rule": self.verdict_derivative_rule,
                "agree": self.verdicts_agree,
                "is_slant_helix": self.is_slant_helix,
                "confidence": self.confidence,
            },
            "square_sum_stats": self.square_sum_stats.to_dict(),
            "min_abs_h_top": self.min_abs_h_top,
            "rule_residual_max": self.rule_residual_max,
            "axis_coupling": self.axis_coupling,
            "axis_parallel_residual": self.axis_parallel_residual,
            "axis_inner_stats": self.axis_inner_stats.to_dict(),
            "axis_projection_residuals": list(self.axis_projection_residuals),
            "vn1_residual": self.vn1_residual,
            "axis_norm_residual": self.axis_norm_residual,
            "frame_orthonormality_defect": self.frame_orthonormality_defect,
            "closure_residual": self.closure_residual,
            "speed_deviation": self.speed_deviation,
            "axis": [[float(x) for x in row] for row in self.axis],
        }


REPORT_SCHEMA_VERSION = "helixlab-report-1"


def assemble_report(
    fs: FrenetSeries,
    hs: HarmonicSeries,
    cfg: Config,
    *,
    source: str,
    speed_deviation: float,
    coupling: float = 1.0,
) -> HelixReport:
    """Run both detectors, build the axis, verify every identity."""
    n = fs.dimension
    det_sum = detect_by_square_sum(hs, cfg)
    det_rule = detect_by_derivative_rule(hs, cfg)
    axis = axis_series(fs, hs, coupling)
    ds = float(fs.grid[1] - fs.grid[0]) if len(fs) > 1 else 1.0
    parallel = verify_axis_parallel(axis, ds) if len(fs) >= 3 else 0.0
    proj, vn1, inner_stats = axis_projection_residuals(fs, hs, axis)
    norm_res = axis_norm_residual(hs, axis, fs.metric, coupling)
    rule_vals = derivative_rule_residual(hs)
    return HelixReport(
        dimension=n,
        metric=fs.metric.eta,
        signs=fs.signs,
        domain=(float(fs.grid[0]), float(fs.grid[-1])),
        samples=len(fs),
        source=source,
        backend=_backend.active_name(),
        verdict_square_sum=det_sum.verdict,
        verdict_derivative_rule=det_rule.verdict,
        verdicts_agree=det_sum.verdict == det_rule.verdict,
        is_slant_helix=det_sum.verdict and det_rule.verdict,
        confidence="confident" if (det_sum.confident and det_rule.confident) else "inconclusive",
        square_sum_stats=det_sum.square_sum_stats,
        min_abs_h_top=det_sum.min_abs_h_top,
        rule_residual_max=float(np.max(np.abs(rule_vals))),
        axis_coupling=coupling,
        axis_parallel_residual=parallel,
        axis_inner_stats=inner_stats,
        axis_projection_residuals=proj,
        vn1_residual=vn1,
        axis_norm_residual=norm_res,
        frame_orthonormality_defect=fs.orthonormality_defect,
        closure_residual=fs.closure_residual,
        speed_deviation=speed_deviation,
        grid=fs.grid,
        axis=axis,
        curvature_values=fs.curvature_values,
        h_values=hs.h_values,
        square_sum_values=square_sum(hs),
        rule_residual_values=rule_vals,
    )


def analyze(spec: CurveSpec, cfg: Config | None = None, coupling: float = 1.0) -> HelixReport:
    """Full pipeline for an expression-defined curve: unit-speed check,
    frame recursion, harmonic curvatures, both detectors, axis verification."""
    cfg = cfg or Config()
    if spec.dimension < 3:
        raise UnsupportedDimensionError(
            f"helix analysis needs dimension >= 3, got {spec.dimension}"
        )
    fs = frenet_series(spec, cfg)
    hs = harmonic_profile(fs)
    return assemble_report(
        fs, hs, cfg,
        source="expression",
        speed_deviation=float(fs.source.get("unit_speed_deviation", 0.0)),
        coupling=coupling,
    )
