"""Built-in verification corpus and the invariant battery run over it.

The corpus pairs positive instances (curves whose construction guarantees
they are slant helices) with negative controls that provably fail one of
the detection gates.  All synthesized instances are constructions
consistent with the detection theory, not examples taken from elsewhere;
the expression-path instances have closed-form frames checked against a
symbolic oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .harmonic import harmonic_profile, recursion_identity_residuals
from .helix import HelixReport
from .jets import CurveSpec
from .sampled import sampled_frenet_series
from .synthesis import CurvatureSpec, integrate_frenet

IDENTITY_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-9
AXIS_RESIDUAL_TOL = 1e-6
AXIS_NORM_TOL = 1e-8
NEGATIVE_PARALLEL_FLOOR = 1e-4  # two orders above the positive threshold


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    kind: str            # "curve" | "curvature"
    payload: dict
    expect_helix: bool
    note: str = ""


def _helix_curve_payload() -> dict:
    return {
        "dimension": 3,
        "metric": [1, 1, 1],
        "coordinates": ["2*cos(s/sqrt(5))", "2*sin(s/sqrt(5))", "s/sqrt(5)"],
        "domain": [0.0, 4.0 * math.pi],
        "samples": 400,
    }


def _minkowski_curve_payload() -> dict:
    return {
        "dimension": 3,
        "metric": [-1, 1, 1],
        "coordinates": ["2*cosh(s/sqrt(5))", "2*sinh(s/sqrt(5))", "s/sqrt(5)"],
        "domain": [0.0, 6.0],
        "samples": 400,
    }


CORPUS: tuple[CorpusInstance, ...] = (
    CorpusInstance(
        "euclidean_circular_helix_n3", "curve", _helix_curve_payload(), True,
        "constant curvatures 0.4 / 0.2, axis (0, 0, sqrt(5)/2)",
    ),
    CorpusInstance(
        "minkowski_hyperbolic_helix_n3", "curve", _minkowski_curve_payload(), True,
        "spacelike curve with timelike normal in diag(-1,1,1)",
    ),
    CorpusInstance(
        "euclidean_constant_n3", "curvature",
        {"dimension": 3, "metric": [1, 1, 1], "curvatures": ["0.3", "0.6"],
         "signs": [1, 1, 1], "domain": [0.0, 2.0 * math.pi], "step": 1e-3, "seed": 1},
        True, "synthesized constant-curvature helix",
    ),
    CorpusInstance(
        "minkowski_constant_n3", "curvature",
        {"dimension": 3, "metric": [-1, 1, 1], "curvatures": ["0.5", "0.3"],
         "signs": [1, -1, 1], "domain": [0.0, 5.0], "step": 1e-3, "seed": 2},
        True, "synthesized constant-curvature curve, mixed signs",
    ),
    CorpusInstance(
        "sine_family_n4", "curvature",
        {"dimension": 4, "metric": [1, 1, 1, 1],
         "curvatures": ["1.0", "1.0", "1.0*0.8*sin(1.0*s)"],
         "signs": [1, 1, 1, 1], "domain": [0.2, math.pi - 0.2], "step": 1e-3, "seed": 3},
        True, "harmonic curvatures trace a circle of radius 0.8",
    ),
    CorpusInstance(
        "sine_family_n4_small", "curvature",
        {"dimension": 4, "metric": [1, 1, 1, 1],
         "curvatures": ["0.8", "1.5", "1.5*0.5*sin(0.8*s)"],
         "signs": [1, 1, 1, 1], "domain": [0.3, math.pi / 0.8 - 0.3], "step": 1e-3, "seed": 4},
        True, "second sine-family instance, radius 0.5, non-unit k_1",
    ),
    CorpusInstance(
        "torus_w_curve_n4", "curve",
        {"dimension": 4, "metric": [1, 1, 1, 1],
         "coordinates": [
             "0.6324555320336759*cos(s)", "0.6324555320336759*sin(s)",
             "0.3872983346207417*cos(2*s)", "0.3872983346207417*sin(2*s)"],
         "domain": [0.0, 2.0 * math.pi], "samples": 400},
        False, "unit-speed curve on a flat torus: constant curvatures, expression path",
    ),
    CorpusInstance(
        "ratio_linear_n3", "curvature",
        {"dimension": 3, "metric": [1, 1, 1], "curvatures": ["0.5", "0.5*s"],
         "signs": [1, 1, 1], "domain": [0.5, 3.0], "step": 1e-3, "seed": 5},
        False, "curvature ratio grows linearly; square sum is s^2",
    ),
    CorpusInstance(
        "w_curve_n4", "curvature",
        {"dimension": 4, "metric": [1, 1, 1, 1], "curvatures": ["1.0", "0.8", "0.6"],
         "signs": [1, 1, 1, 1], "domain": [0.0, 3.0], "step": 1e-3, "seed": 6},
        False, "all curvatures constant; top harmonic curvature vanishes",
    ),
    CorpusInstance(
        "ratio_sine_n3", "curvature",
        {"dimension": 3, "metric": [1, 1, 1], "curvatures": ["1.0", "0.5 + 0.3*sin(s)"],
         "signs": [1, 1, 1], "domain": [0.0, 2.0 * math.pi], "step": 1e-3, "seed": 7},
        False, "oscillating curvature ratio",
    ),
    CorpusInstance(
        "wobble_n4", "curvature",
        {"dimension": 4, "metric": [1, 1, 1, 1],
         "curvatures": ["0.9", "1.0", "0.8 + 0.4*sin(2*s)"],
         "signs": [1, 1, 1, 1], "domain": [0.0, 3.0], "step": 1e-3, "seed": 8},
        False, "square sum oscillates with the top curvature",
    ),
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | bool
    bound: str

    def to_dict(self) -> dict:
        value = self.value if isinstance(self.value, bool) else float(self.value)
        return {"check": self.name, "passed": self.passed,
                "value": value, "bound": self.bound}


@dataclass
class InstanceResult:
    instance: CorpusInstance
    report: HelixReport
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def analyze_instance(inst: CorpusInstance, cfg: Config) -> tuple[HelixReport, dict[str, np.ndarray]]:
    """Run one corpus instance through its analysis path; also returns the
    recursion identity residuals for the invariant battery."""
    from .frenet import frenet_series
    from .helix import assemble_report

    if inst.kind == "curve":
        spec = CurveSpec.from_dict({**inst.payload, "samples": cfg.samples})
        fs = frenet_series(spec, cfg)
        source = "expression"
    else:
        spec = CurvatureSpec.from_dict(inst.payload)
        fs = sampled_frenet_series(integrate_frenet(spec, cfg=cfg), cfg)
        source = "sampled"
    hs = harmonic_profile(fs)
    report = assemble_report(
        fs, hs, cfg, source=source,
        speed_deviation=float(
            fs.source.get("unit_speed_deviation", fs.source.get("speed_deviation", 0.0))
        ),
    )
    identities = recursion_identity_residuals(hs)
    return report, identities


def run_instance(inst: CorpusInstance, cfg: Config | None = None) -> InstanceResult:
    """Invariant battery for one instance."""
    cfg = cfg or Config()
    report, identities = analyze_instance(inst, cfg)
    checks: list[CheckResult] = []

    def check(name: str, passed: bool, value, bound: str):
        checks.append(CheckResult(name, bool(passed), value, bound))

    check("detectors_agree", report.verdicts_agree, report.verdicts_agree, "equal verdicts")
    check(
        "verdict_expected",
        report.is_slant_helix == inst.expect_helix,
        report.is_slant_helix,
        f"expected {inst.expect_helix}",
    )
    worst_identity = max(
        (float(np.max(np.abs(v))) for v in identities.values()), default=0.0
    )
    check("recursion_identities", worst_identity < IDENTITY_TOL, worst_identity,
          f"< {IDENTITY_TOL}")
    check(
        "frame_orthonormality",
        report.frame_orthonormality_defect < ORTHONORMALITY_TOL,
        report.frame_orthonormality_defect,
        f"< {ORTHONORMALITY_TOL}",
    )
    check("axis_norm_identity", report.axis_norm_residual < AXIS_NORM_TOL,
          report.axis_norm_residual, f"< {AXIS_NORM_TOL}")
    if inst.expect_helix:
        check("axis_parallel", report.axis_parallel_residual < AXIS_RESIDUAL_TOL,
              report.axis_parallel_residual, f"< {AXIS_RESIDUAL_TOL}")
        check(
            "axis_inner_constancy",
            report.axis_inner_stats.rel_variation < AXIS_RESIDUAL_TOL,
            report.axis_inner_stats.rel_variation,
            f"< {AXIS_RESIDUAL_TOL}",
        )
        worst_proj = max(max(report.axis_projection_residuals), report.vn1_residual)
        check("axis_projections", worst_proj < AXIS_RESIDUAL_TOL, worst_proj,
              f"< {AXIS_RESIDUAL_TOL}")
    else:
        check(
            "axis_parallel_fails",
            report.axis_parallel_residual > NEGATIVE_PARALLEL_FLOOR,
            report.axis_parallel_residual,
            f"> {NEGATIVE_PARALLEL_FLOOR}",
        )
    return InstanceResult(instance=inst, report=report, checks=checks)


def verify_corpus(cfg: Config | None = None) -> list[InstanceResult]:
    cfg = cfg or Config()
    return [run_instance(inst, cfg) for inst in CORPUS]
