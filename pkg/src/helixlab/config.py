"""Run configuration: tolerances, grid size, jet order, integrator step."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import SpecValidationError

TOLERANCE_KEYS = (
    "const_tol",
    "h_top_floor",
    "sum_floor",
    "residual_tol",
    "null_tol",
    "unit_speed_tol",
    "curvature_floor",
    "frame_tol",
    "drift_tol",
)


@dataclass(frozen=True)
class Config:
    const_tol: float = 1e-6       # relative variation below which a sampled scalar is constant
    h_top_floor: float = 1e-7     # min |H_{n-2}| for a nonzero top harmonic curvature
    sum_floor: float = 1e-9       # |mean| of the signed square sum must exceed this
    residual_tol: float = 1e-8    # frame-system closure residual bound
    null_tol: float = 1e-9        # relative nullness threshold
    unit_speed_tol: float = 1e-8  # max | |g(a',a')| - 1 | accepted on the grid
    curvature_floor: float = 1e-10
    frame_tol: float = 1e-9       # pseudo-orthonormality defect considered benign
    drift_tol: float = 1e-6       # max per-step re-orthonormalization correction
    samples: int = 400
    jet_order: int | None = None  # default 2n+2, resolved per curve
    step: float = 1e-3            # RK4 step for synthesis
    seed: int = 0

    def __post_init__(self):
        for key in TOLERANCE_KEYS:
            v = getattr(self, key)
            if not (v > 0.0):
                raise SpecValidationError(f"tolerance {key} must be > 0, got {v!r}")
        if self.samples < 16:
            raise SpecValidationError(f"samples must be >= 16, got {self.samples}")
        if self.step <= 0.0:
            raise SpecValidationError(f"step must be > 0, got {self.step}")
        if self.jet_order is not None and self.jet_order < 4:
            raise SpecValidationError(f"jet order must be >= 4, got {self.jet_order}")

    def replace(self, **kw) -> "Config":
        return dataclasses.replace(self, **kw)

    def resolve_jet_order(self, n: int) -> int:
        """Default analysis jet order: one per frame level, one per harmonic
        recursion step, plus reserve for derivative checks."""
        order = self.jet_order if self.jet_order is not None else 2 * n + 2
        minimum = max(n + 2, 2 * n - 2)
        if order < minimum:
            raise SpecValidationError(
                f"jet order {order} too small for dimension {n}; need >= {minimum}"
            )
        return order

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SpecValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "Config":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SpecValidationError(f"config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise SpecValidationError(f"config file {path} must hold a JSON object")
        return cls.from_dict(data)


def apply_tol_overrides(cfg: Config, pairs) -> Config:
    """Apply repeatable KEY=VAL tolerance flags."""
    updates = {}
    for pair in pairs:
        key, sep, val = pair.partition("=")
        key = key.strip()
        if not sep or key not in TOLERANCE_KEYS:
            raise SpecValidationError(
                f"bad --tol {pair!r}; expected KEY=VAL with KEY in {TOLERANCE_KEYS}"
            )
        try:
            updates[key] = float(val)
        except ValueError:
            raise SpecValidationError(f"bad --tol value in {pair!r}") from None
    return cfg.replace(**updates) if updates else cfg
