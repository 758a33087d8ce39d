"""helixlab: frame fields, harmonic curvatures and slant-helix detection
for non-null curves in flat pseudo-Euclidean space of any signature.

The library computes pseudo-orthonormal moving frames and curvatures of
unit-speed curves through truncated-jet arithmetic, evaluates the harmonic
curvature recursion, decides slant-helix membership by two equivalent
criteria, reconstructs and verifies the axis field, and synthesizes test
curves by integrating the frame system from prescribed curvatures.
"""

__version__ = "0.1.0"

from .config import Config
from .errors import HelixLabError
from .expressions import parse_expr, pretty
from .frenet import FrenetData, FrenetSeries, frenet_at, frenet_series
from .harmonic import (
    HarmonicProfile,
    HarmonicSeries,
    derivative_rule_residual,
    harmonic_profile,
    square_sum,
)
from .helix import (
    ConstancyStats,
    HelixReport,
    analyze,
    axis_from_frame,
    axis_norm_residual,
    axis_projection_residuals,
    axis_series,
    detect_by_derivative_rule,
    detect_by_square_sum,
    verify_axis_parallel,
)
from .jets import CurveSpec, Jet, JetVector, curve_jets, eval_jet, unit_speed_check
from .metric import CausalCharacter, MetricSignature, causal_character, inner, norm, normalize
from .sampled import analyze_sampled, curvature_recovery_error, recover_curvatures
from .synthesis import (
    CurvatureSpec,
    InitialFrame,
    SampledCurve,
    integrate_frenet,
    negative_family,
    random_initial_frame,
    slant_family,
    standard_initial_frame,
)

__all__ = [
    "Config",
    "HelixLabError",
    "parse_expr",
    "pretty",
    "FrenetData",
    "FrenetSeries",
    "frenet_at",
    "frenet_series",
    "HarmonicProfile",
    "HarmonicSeries",
    "harmonic_profile",
    "square_sum",
    "derivative_rule_residual",
    "ConstancyStats",
    "HelixReport",
    "analyze",
    "analyze_sampled",
    "axis_from_frame",
    "axis_series",
    "axis_norm_residual",
    "axis_projection_residuals",
    "detect_by_derivative_rule",
    "detect_by_square_sum",
    "verify_axis_parallel",
    "CurveSpec",
    "Jet",
    "JetVector",
    "curve_jets",
    "eval_jet",
    "unit_speed_check",
    "CausalCharacter",
    "MetricSignature",
    "causal_character",
    "inner",
    "norm",
    "normalize",
    "curvature_recovery_error",
    "recover_curvatures",
    "CurvatureSpec",
    "InitialFrame",
    "SampledCurve",
    "integrate_frenet",
    "negative_family",
    "random_initial_frame",
    "slant_family",
    "standard_initial_frame",
]
