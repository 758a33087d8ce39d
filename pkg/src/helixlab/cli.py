"""Command-line front end.

Subcommands::

    helixlab analyze CURVE_FILE      detection report for an expression curve
    helixlab synthesize SPEC_FILE    integrate prescribed curvatures, then analyze
    helixlab verify                  run the built-in corpus invariant battery

Exit codes: 0 analyzed/passed, 1 verify failure, 2 bad input, 3 numerical
degeneracy, 4 integrator drift.  Errors are emitted as JSON objects on
stderr.  Numeric CSV output uses 17 significant digits so values round-trip
double precision; JSON numbers use Python's shortest exact representation.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import click

from . import __version__
from .config import Config, apply_tol_overrides
from .corpus import CORPUS, verify_corpus
from .errors import HelixLabError, SpecValidationError
from .helix import HelixReport, analyze
from .jets import CurveSpec
from .sampled import analyze_sampled
from .synthesis import CurvatureSpec, integrate_frenet, negative_family, slant_family

log = logging.getLogger("helixlab")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging():
    level = os.environ.get("HELIXLAB_LOG", "warn").strip().lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: Path, data: dict):
    _atomic_write(path, json.dumps(data, indent=2, sort_keys=False) + "\n")


def _write_csv(path: Path, header: list[str], columns: list) -> None:
    rows = [",".join(header)]
    for i in range(len(columns[0])):
        rows.append(",".join(_fmt(col[i]) for col in columns))
    _atomic_write(path, "\n".join(rows) + "\n")


def _report_files(report: HelixReport, out: Path):
    n = report.dimension
    _write_json(out / "report.json", report.to_dict())
    header = (
        ["s"]
        + [f"k{i}" for i in range(1, n)]
        + [f"h{i}" for i in range(1, n - 1)]
        + ["square_sum", "rule_residual"]
    )
    columns = (
        [report.grid]
        + [report.curvature_values[:, i] for i in range(n - 1)]
        + [report.h_values[:, i] for i in range(1, n - 1)]
        + [report.square_sum_values, report.rule_residual_values]
    )
    _write_csv(out / "profile.csv", header, columns)
    _write_csv(
        out / "axis.csv",
        ["s"] + [f"x{j}" for j in range(1, n + 1)],
        [report.grid] + [report.axis[:, j] for j in range(n)],
    )


def _emit_error(exc: Exception) -> int:
    if isinstance(exc, HelixLabError):
        payload = exc.payload()
        code = exc.exit_code
    elif isinstance(exc, json.JSONDecodeError):
        payload = {"error": "ParseError", "message": str(exc)}
        code = 2
    else:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        code = 3
    click.echo(json.dumps(payload), err=True)
    return code


def _load_json_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SpecValidationError(f"{path} must hold a JSON object")
    return data


def _common_options(fn):
    @click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
                  default=None, help="JSON file with config fields.")
    @click.option("--samples", type=int, default=None, help="Analysis grid size.")
    @click.option("--jet-order", type=int, default=None, help="Jet truncation order.")
    @click.option("--tol", "tols", multiple=True, metavar="KEY=VAL",
                  help="Tolerance override, repeatable.")
    @click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
                  help="Output directory.")
    @click.option("--seed", type=int, default=None, help="RNG seed override.")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)

    return wrapper


def _build_config(config_file, samples, jet_order, tols, seed) -> Config:
    cfg = Config.from_file(config_file) if config_file else Config()
    updates = {}
    if samples is not None:
        updates["samples"] = samples
    if jet_order is not None:
        updates["jet_order"] = jet_order
    if seed is not None:
        updates["seed"] = seed
    if updates:
        cfg = cfg.replace(**updates)
    return apply_tol_overrides(cfg, tols)


@click.group()
@click.version_option(version=__version__, prog_name="helixlab")
def main():
    """Frame fields, harmonic curvatures and slant-helix detection for
    non-null curves in flat pseudo-Euclidean space."""
    _setup_logging()


@main.command("analyze")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@_common_options
def cmd_analyze(curve_file, config_file, samples, jet_order, tols, out_dir, seed):
    """Analyze an expression-defined unit-speed curve.

    CURVE_FILE holds {"dimension", "metric", "coordinates", "domain",
    "samples"}.  Writes report.json, profile.csv and axis.csv.
    """
    try:
        cfg = _build_config(config_file, samples, jet_order, tols, seed)
        data = _load_json_file(curve_file)
        if samples is not None:
            data = {**data, "samples": samples}
        spec = CurveSpec.from_dict(data)
        cfg = cfg.replace(samples=spec.samples)
        report = analyze(spec, cfg)
        _report_files(report, Path(out_dir))
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        sys.exit(_emit_error(exc))
    log.info("analyzed %s: slant helix = %s", curve_file, report.is_slant_helix)
    sys.exit(0)


def _curvature_spec_from_payload(data: dict, seed: int | None) -> CurvatureSpec:
    if "family" in data:
        family = data["family"]
        n = int(data.get("dimension", 3))
        params = dict(data.get("params", {}))
        if seed is not None:
            params["seed"] = seed
        if family == "slant":
            return slant_family(n, **params)
        return negative_family(n, family, **params)
    if seed is not None:
        data = {**data, "seed": seed}
    return CurvatureSpec.from_dict(data)


@main.command("synthesize")
@click.argument("curvature_file", type=click.Path(exists=True, dir_okay=False))
@_common_options
def cmd_synthesize(curvature_file, config_file, samples, jet_order, tols, out_dir, seed):
    """Integrate prescribed curvatures into a curve, then analyze it.

    CURVATURE_FILE holds {"dimension", "metric", "curvatures", "signs",
    "domain", "step", "seed"} or a family request {"family": "slant" |
    "ratio_linear" | "w_curve", "dimension", "params"}.  Writes curve.csv
    plus the analysis report files.
    """
    try:
        cfg = _build_config(config_file, samples, jet_order, tols, seed)
        spec = _curvature_spec_from_payload(_load_json_file(curvature_file), seed)
        curve = integrate_frenet(spec, cfg=cfg)
        report = analyze_sampled(curve, cfg)
        out = Path(out_dir)
        n = curve.dimension
        header = (
            ["s"]
            + [f"a{j}" for j in range(1, n + 1)]
            + [f"v{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        )
        columns = (
            [curve.s]
            + [curve.points[:, j] for j in range(n)]
            + [curve.frames[:, i, j] for i in range(n) for j in range(n)]
        )
        _write_csv(out / "curve.csv", header, columns)
        _report_files(report, out)
    except Exception as exc:  # noqa: BLE001
        sys.exit(_emit_error(exc))
    log.info("synthesized %s: slant helix = %s", curvature_file, report.is_slant_helix)
    sys.exit(0)


@main.command("verify")
@click.option("--list", "list_only", is_flag=True, help="List corpus instances and exit.")
@_common_options
def cmd_verify(list_only, config_file, samples, jet_order, tols, out_dir, seed):
    """Run the built-in corpus through the invariant battery.

    Prints one row per instance and writes verify_report.json; exits 0 only
    if every check passes.
    """
    if list_only:
        for inst in CORPUS:
            kind = "expression" if inst.kind == "curve" else "synthesized"
            click.echo(f"{inst.name:32s} {kind:11s} "
                       f"{'helix' if inst.expect_helix else 'control':7s} {inst.note}")
        sys.exit(0)
    try:
        cfg = _build_config(config_file, samples, jet_order, tols, seed)
        results = verify_corpus(cfg)
        rows = []
        all_ok = True
        for res in results:
            ok = res.passed
            all_ok &= ok
            verdict = "helix" if res.report.is_slant_helix else "control"
            failed = [c.name for c in res.checks if not c.passed]
            click.echo(
                f"{'PASS' if ok else 'FAIL'}  {res.instance.name:32s} "
                f"{verdict:7s} {res.report.confidence:12s}"
                + (f"  failed: {', '.join(failed)}" if failed else "")
            )
            rows.append({
                "name": res.instance.name,
                "kind": res.instance.kind,
                "expect_helix": res.instance.expect_helix,
                "passed": ok,
                "verdicts": {
                    "square_sum": res.report.verdict_square_sum,
                    "derivative_rule": res.report.verdict_derivative_rule,
                    "confidence": res.report.confidence,
                },
                "checks": [c.to_dict() for c in res.checks],
            })
        _write_json(Path(out_dir) / "verify_report.json", {
            "schema_version": "helixlab-verify-1",
            "config": cfg.to_dict(),
            "instances": rows,
            "passed": all_ok,
        })
    except Exception as exc:  # noqa: BLE001
        sys.exit(_emit_error(exc))
    click.echo("all checks passed" if all_ok else "corpus verification FAILED")
    sys.exit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
