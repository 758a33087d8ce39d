"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s to see them all).
Timed criteria measure steady-state runtime; kernel compilation happens in
the session warmup fixture.
"""

import dataclasses
import json
import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from helixlab import expressions as ex
from helixlab.cli import main as cli_main
from helixlab.config import Config
from helixlab.corpus import CORPUS, verify_corpus
from helixlab.frenet import frenet_series
from helixlab.harmonic import harmonic_profile, harmonic_stacks
from helixlab.helix import analyze
from helixlab.jets import eval_jet_grid
from helixlab.sampled import analyze_sampled, curvature_recovery_error
from helixlab.synthesis import integrate_frenet, negative_family, slant_family

SQRT5 = math.sqrt(5.0)


def _report(num: int, ok: bool, text: str):
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num}: {text}"


@pytest.fixture(scope="module")
def corpus_results():
    return verify_corpus(Config())


def test_criterion_1_circular_helix_ground_truth(helix_spec):
    t0 = time.perf_counter()
    report = analyze(helix_spec)
    elapsed = time.perf_counter() - t0
    kv = report.curvature_values
    checks = {
        "k1 = 0.4 within 1e-10": np.max(np.abs(kv[:, 0] - 0.4)) < 1e-10,
        "k2 = 0.2 within 1e-10": np.max(np.abs(kv[:, 1] - 0.2)) < 1e-10,
        "h1 = 0.5 within 1e-10": np.max(np.abs(report.h_values[:, 1] - 0.5)) < 1e-10,
        "square sum 0.25, rel var < 1e-10": (
            abs(report.square_sum_stats.mean - 0.25) < 1e-10
            and report.square_sum_stats.rel_variation < 1e-10
        ),
        "both detectors true": report.verdict_square_sum and report.verdict_derivative_rule,
        "axis (0,0,sqrt(5)/2) within 1e-9": float(
            np.max(np.abs(report.axis - np.array([0.0, 0.0, SQRT5 / 2.0])))
        ) < 1e-9,
        "parallel residual < 1e-8": report.axis_parallel_residual < 1e-8,
        "runtime < 1 s": elapsed < 1.0,
    }
    _report(1, all(checks.values()),
            f"circular helix ground truth ({elapsed:.3f}s) "
            + "; ".join(k for k, v in checks.items() if not v))


def test_criterion_2_sine_family():
    spec = slant_family(4, c1=1.0, c2=1.0, amplitude=0.8, delta=0.2)
    t0 = time.perf_counter()
    curve = integrate_frenet(spec)
    report = analyze_sampled(curve)
    elapsed = time.perf_counter() - t0
    s = report.grid
    checks = {
        "h1 = 0.8 sin(s) within 1e-6": float(
            np.max(np.abs(report.h_values[:, 1] - 0.8 * np.sin(s)))
        ) < 1e-6,
        "h2 = -0.8 cos(s) within 1e-6": float(
            np.max(np.abs(report.h_values[:, 2] + 0.8 * np.cos(s)))
        ) < 1e-6,
        "square sum 0.64 within 1e-6": float(
            np.max(np.abs(report.square_sum_values - 0.64))
        ) < 1e-6,
        "both detectors true": report.verdict_square_sum and report.verdict_derivative_rule,
        "parallel residual < 1e-6": report.axis_parallel_residual < 1e-6,
        "projection residuals < 1e-6": (
            max(report.axis_projection_residuals) < 1e-6 and report.vn1_residual < 1e-6
        ),
        "norm identity < 1e-6": report.axis_norm_residual < 1e-6,
        "runtime < 5 s": elapsed < 5.0,
    }
    _report(2, all(checks.values()),
            f"sine family n=4 ({elapsed:.3f}s) "
            + "; ".join(k for k, v in checks.items() if not v))


def test_criterion_3_negative_controls():
    ratio = analyze_sampled(integrate_frenet(negative_family(3, "ratio_linear")))
    wcurve = analyze_sampled(integrate_frenet(negative_family(4, "w_curve")))
    checks = {
        "ratio_linear both false": not ratio.verdict_square_sum
        and not ratio.verdict_derivative_rule,
        "ratio_linear rel variation > 0.1": ratio.square_sum_stats.rel_variation > 0.1,
        "w_curve both false": not wcurve.verdict_square_sum
        and not wcurve.verdict_derivative_rule,
        "w_curve max |h2| < 1e-9": float(np.max(np.abs(wcurve.h_values[:, 2]))) < 1e-9,
    }
    _report(3, all(checks.values()),
            "negative controls " + "; ".join(k for k, v in checks.items() if not v))


def test_criterion_4_detector_agreement_sweep(corpus_results):
    positives = sum(1 for r in corpus_results if r.instance.expect_helix)
    negatives = len(corpus_results) - positives
    has_minkowski = any(
        -1 in r.instance.payload["metric"] for r in corpus_results
    )
    agree = all(r.report.verdicts_agree for r in corpus_results)
    expected = all(
        r.report.is_slant_helix == r.instance.expect_helix for r in corpus_results
    )
    ok = agree and expected and positives >= 6 and negatives >= 4 and has_minkowski
    _report(4, ok,
            f"detector agreement on {positives} positive + {negatives} negative instances"
            + ("" if agree else "; DISAGREEMENT"))


def test_criterion_5_unconditional_identities(corpus_results):
    cfg = Config()
    worst_identity = 0.0
    worst_ortho = 0.0
    from helixlab.corpus import analyze_instance

    for inst in CORPUS:
        report, identities = analyze_instance(inst, cfg)
        for vals in identities.values():
            worst_identity = max(worst_identity, float(np.max(np.abs(vals))))
        worst_ortho = max(worst_ortho, report.frame_orthonormality_defect)
    ok = worst_identity < 1e-8 and worst_ortho < 1e-9
    _report(5, ok,
            f"recursion identities {worst_identity:.2e} < 1e-8, "
            f"orthonormality {worst_ortho:.2e} < 1e-9 on every corpus curve")


def test_criterion_6_round_trip_and_order():
    specs = [
        slant_family(3, c1=0.4, c2=0.2),
        slant_family(4, c1=1.0, c2=1.0, amplitude=0.8, delta=0.2),
    ]
    checks = {}
    for spec in specs:
        t0 = time.perf_counter()
        curve = integrate_frenet(spec)
        err = curvature_recovery_error(curve, spec)
        elapsed = time.perf_counter() - t0
        n = spec.dimension
        checks[f"n={n} recovery {err:.2e} < 1e-5"] = err < 1e-5
        checks[f"n={n} runtime {elapsed:.2f}s < 10 s"] = elapsed < 10.0
    # integrator order: halve the step where truncation dominates roundoff
    base = slant_family(3, c1=0.4, c2=0.2)
    errs = []
    for h in (0.04, 0.02):
        sp = dataclasses.replace(base, step=h)
        errs.append(curvature_recovery_error(integrate_frenet(sp), sp))
    ratio = errs[0] / errs[1]
    checks[f"halving improves by {ratio:.1f} >= 8"] = ratio >= 8.0
    _report(6, all(checks.values()),
            "synthesis round-trip: " + "; ".join(checks))


def test_criterion_7_jet_derivatives_vs_finite_differences(helix_spec, minkowski_spec):
    h = 1e-4
    worst = 0.0
    for spec in (helix_spec, minkowski_spec):
        lo, hi = spec.domain
        grid = np.linspace(lo + 2 * h, hi - 2 * h, 200)
        hs0 = harmonic_profile(frenet_series(spec, grid=grid))
        hsp = harmonic_profile(frenet_series(spec, grid=grid + h))
        hsm = harmonic_profile(frenet_series(spec, grid=grid - h))
        for i in range(1, spec.dimension - 1):
            fd = (hsp.h_jets[i][:, 0] - hsm.h_jets[i][:, 0]) / (2 * h)
            worst = max(worst, float(np.max(np.abs(hs0.h_jets[i][:, 1] - fd))))
    # the sine family exercises genuinely varying harmonic curvatures
    grid = np.linspace(0.3, math.pi - 0.3, 200)
    texts = ("1.0", "1.0", "0.8*sin(s)")
    jets = {d: [eval_jet_grid(ex.parse_expr(t), grid + d * h, 6) for t in texts]
            for d in (-1, 0, 1)}
    H = {d: harmonic_stacks(jets[d], (1, 1, 1, 1), 4) for d in (-1, 0, 1)}
    for i in (1, 2):
        fd = (H[1][i][:, 0] - H[-1][i][:, 0]) / (2 * h)
        worst = max(worst, float(np.max(np.abs(H[0][i][:, 1] - fd))))
    _report(7, worst < 1e-6,
            f"jet-propagated derivatives vs central differences: {worst:.2e} < 1e-6")


def test_criterion_8_determinism(tmp_path):
    runner = CliRunner()
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        result = runner.invoke(
            cli_main, ["verify", "--out", str(out), "--tol", "const_tol=1e-6"]
        )
        assert result.exit_code == 0, result.output
        outputs.append((out / "verify_report.json").read_bytes())
    ok = outputs[0] == outputs[1]
    # analysis reports are byte-stable too
    helix = tmp_path / "helix.json"
    helix.write_text(json.dumps({
        "dimension": 3, "metric": [1, 1, 1],
        "coordinates": ["2*cos(s/sqrt(5))", "2*sin(s/sqrt(5))", "s/sqrt(5)"],
        "domain": [0.0, 4.0 * math.pi], "samples": 400,
    }))
    reports = []
    for run in ("c", "d"):
        out = tmp_path / run
        result = runner.invoke(cli_main, ["analyze", str(helix), "--out", str(out)])
        assert result.exit_code == 0
        reports.append((out / "report.json").read_bytes())
    ok = ok and reports[0] == reports[1]
    _report(8, ok, "byte-identical reports for identical inputs and config")
