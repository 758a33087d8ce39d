"""Jets of coordinate expressions: exact derivatives of curves at a point.

``eval_jet`` turns an expression into derivative values d^0..d^m at s0;
``curve_jets`` does so for every coordinate of a curve.  Evaluation runs
on the active kernel backend (numba or numpy) over whole grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from . import expressions as ex
from ._backend.codes import STATUS_DIV_ZERO, STATUS_NEG_SQRT, STATUS_OK
from .errors import (
    DIVISION_BY_ZERO,
    NEGATIVE_SQRT,
    EvalError,
    NullTangentError,
    SpecValidationError,
)
from .metric import MetricSignature


@dataclass(frozen=True)
class Jet:
    """Derivative values d^0 f .. d^m f of a scalar function at base_point."""

    base_point: float
    derivs: np.ndarray

    @property
    def order(self) -> int:
        return self.derivs.shape[-1] - 1

    @property
    def value(self) -> float:
        return float(self.derivs[0])

    def deriv(self, k: int) -> float:
        return float(self.derivs[k])


@dataclass(frozen=True)
class JetVector:
    """Per-coordinate jets of a curve at one parameter value: shape (n, m+1)."""

    base_point: float
    derivs: np.ndarray

    @property
    def dimension(self) -> int:
        return self.derivs.shape[0]

    @property
    def order(self) -> int:
        return self.derivs.shape[-1] - 1

    @property
    def values(self) -> np.ndarray:
        return self.derivs[:, 0]

    def component(self, j: int) -> Jet:
        return Jet(self.base_point, self.derivs[j])


@dataclass(frozen=True)
class CurveSpec:
    """A curve given by coordinate expressions in s on a closed interval."""

    metric: MetricSignature
    coordinates: tuple[ex.Expr, ...]
    domain: tuple[float, float]
    samples: int = 400
    coordinate_texts: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.coordinates) != self.metric.n:
            raise SpecValidationError(
                f"{len(self.coordinates)} coordinates for dimension {self.metric.n}"
            )
        lo, hi = self.domain
        if not (lo < hi):
            raise SpecValidationError(f"empty domain [{lo}, {hi}]")
        if self.samples < 16:
            raise SpecValidationError(f"samples must be >= 16, got {self.samples}")

    @property
    def dimension(self) -> int:
        return self.metric.n

    def grid(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.samples)

    @classmethod
    def from_dict(cls, data: dict) -> "CurveSpec":
        try:
            n = int(data["dimension"])
            eta = tuple(int(e) for e in data["metric"])
            coords = tuple(str(c) for c in data["coordinates"])
            domain = (float(data["domain"][0]), float(data["domain"][1]))
            samples = int(data.get("samples", 400))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SpecValidationError(f"bad curve spec: {exc}") from exc
        if n != len(eta):
            raise SpecValidationError(f"dimension {n} does not match metric {eta}")
        return cls(
            metric=MetricSignature(eta),
            coordinates=tuple(ex.parse_expr(c) for c in coords),
            domain=domain,
            samples=samples,
            coordinate_texts=coords,
        )

    def to_dict(self) -> dict:
        texts = self.coordinate_texts or tuple(ex.pretty(c) for c in self.coordinates)
        return {
            "dimension": self.metric.n,
            "metric": list(self.metric.eta),
            "coordinates": list(texts),
            "domain": [self.domain[0], self.domain[1]],
            "samples": self.samples,
        }


def eval_jet_grid(ast: ex.Expr, svals: np.ndarray, order: int) -> np.ndarray:
    """Jets of an expression over a grid: returns (P, order+1)."""
    if order < 0:
        raise SpecValidationError(f"jet order must be >= 0, got {order}")
    svals = np.ascontiguousarray(svals, dtype=np.float64)
    tape = ex.compile_tape(ast)
    kern = _backend.active()
    out, status, bad = kern.eval_tape(
        tape.ops, tape.fargs, tape.iargs, svals, order, tape.max_depth
    )
    if status == STATUS_DIV_ZERO:
        raise EvalError(DIVISION_BY_ZERO, svals[bad])
    if status == STATUS_NEG_SQRT:
        raise EvalError(NEGATIVE_SQRT, svals[bad])
    assert status == STATUS_OK
    return out


def eval_jet(ast: ex.Expr, s0: float, order: int) -> Jet:
    """Derivative values of the expression at s0, exact to rounding."""
    row = eval_jet_grid(ast, np.array([float(s0)]), order)
    return Jet(float(s0), row[0])


def eval_values(ast: ex.Expr, svals: np.ndarray) -> np.ndarray:
    """Plain values over a grid (order-0 jets)."""
    return eval_jet_grid(ast, svals, 0)[:, 0]


def curve_jets_grid(spec: CurveSpec, svals: np.ndarray, order: int) -> np.ndarray:
    """Coordinate jets over a grid: returns (P, n, order+1)."""
    svals = np.ascontiguousarray(svals, dtype=np.float64)
    out = np.empty((svals.shape[0], spec.dimension, order + 1))
    for j, coord in enumerate(spec.coordinates):
        out[:, j, :] = eval_jet_grid(coord, svals, order)
    return out


def curve_jets(spec: CurveSpec, s0: float, order: int) -> JetVector:
    """Coordinate jets of the curve at one parameter value."""
    lo, hi = spec.domain
    if not (lo <= s0 <= hi):
        raise SpecValidationError(f"s0 = {s0!r} outside domain [{lo}, {hi}]")
    rows = curve_jets_grid(spec, np.array([float(s0)]), order)
    return JetVector(float(s0), rows[0])


def unit_speed_check(
    spec: CurveSpec,
    grid: np.ndarray | None = None,
    null_tol: float = 1e-9,
) -> float:
    """Max over the grid of | |g(a',a')| - 1 |.

    The caller rejects the curve when the returned deviation exceeds its
    tolerance.  Raises NullTangentError if the tangent is null anywhere.
    """
    if grid is None:
        grid = spec.grid()
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    jets = curve_jets_grid(spec, grid, 1)
    tangents = jets[:, :, 1]
    eta = spec.metric.eta_array
    q = (tangents * tangents) @ eta
    eucl2 = np.einsum("pj,pj->p", tangents, tangents)
    null = np.abs(q) <= null_tol * eucl2
    if null.any():
        raise NullTangentError(grid[int(np.argmax(null))])
    return float(np.max(np.abs(np.abs(q) - 1.0)))
