"""Exception hierarchy.

Every error carries enough structured detail for the CLI to emit a JSON
error object and map to an exit code: 2 for bad input, 3 for numerical
degeneracy, 4 for integrator drift.
"""

from __future__ import annotations


class HelixLabError(Exception):
    """Base class for all library errors."""

    exit_code = 3  # numerical degeneracy unless a subclass says otherwise

    def payload(self) -> dict:
        """Structured detail for machine-readable error reports."""
        out = {"error": type(self).__name__, "message": str(self)}
        detail = {k: v for k, v in vars(self).items() if not k.startswith("_")}
        if detail:
            out["detail"] = detail
        return out


class DimensionError(HelixLabError):
    exit_code = 2


class SpecValidationError(HelixLabError):
    """Input spec violates a documented contract (shape, ranges, schema)."""

    exit_code = 2


class UnsupportedDimensionError(HelixLabError):
    exit_code = 2


class ParseError(HelixLabError):
    """Malformed expression text."""

    exit_code = 2

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = tuple(expected)


DIVISION_BY_ZERO = "division_by_zero"
NEGATIVE_SQRT = "negative_sqrt"


class EvalError(HelixLabError):
    """Expression evaluation hit a guarded operation."""

    def __init__(self, kind: str, s0: float):
        s0 = float(s0)
        super().__init__(f"{kind} while evaluating at s = {s0!r}")
        self.kind = kind
        self.s0 = float(s0)


class NullVectorError(HelixLabError):
    """Vector is null (|g(u,u)| below tolerance) where a non-null one is required."""


class NullTangentError(HelixLabError):
    def __init__(self, s0: float):
        s0 = float(s0)
        super().__init__(f"tangent vector is null at s = {s0!r}")
        self.s0 = float(s0)


class UnitSpeedError(HelixLabError):
    def __init__(self, deviation: float, tol: float):
        deviation = float(deviation)
        super().__init__(
            f"curve is not unit-speed: max | |g(a',a')| - 1 | = {deviation!r} > {tol!r}"
        )
        self.deviation = float(deviation)
        self.tol = float(tol)


class NullFrameVectorError(HelixLabError):
    """A frame-recursion direction is null: the curve is not proper of full order."""

    def __init__(self, s0: float, level: int):
        s0 = float(s0)
        super().__init__(f"frame direction {level} is null at s = {s0!r}")
        self.s0 = float(s0)
        self.level = int(level)


class DegenerateCurvatureError(HelixLabError):
    def __init__(self, s0: float, level: int, value: float):
        s0, value = float(s0), float(value)
        super().__init__(f"curvature k_{level} = {value!r} below floor at s = {s0!r}")
        self.s0 = float(s0)
        self.level = int(level)
        self.value = float(value)


class FrenetClosureError(HelixLabError):
    def __init__(self, s0: float, residual: float, tol: float):
        s0, residual = float(s0), float(residual)
        super().__init__(
            f"frame system does not close: residual {residual!r} > {tol!r} at s = {s0!r}"
        )
        self.s0 = float(s0)
        self.residual = float(residual)
        self.tol = float(tol)


class SignFlipError(HelixLabError):
    def __init__(self, s0: float, level: int):
        s0 = float(s0)
        super().__init__(f"frame sign pattern changes at s = {s0!r} (vector {level})")
        self.s0 = float(s0)
        self.level = int(level)


class InsufficientJetOrderError(HelixLabError):
    def __init__(self, needed: int, available: int, what: str):
        super().__init__(
            f"{what} needs jet order >= {needed}, only {available} available"
        )
        self.needed = int(needed)
        self.available = int(available)
        self.what = what


class DriftError(HelixLabError):
    exit_code = 4

    def __init__(self, s0: float, correction: float, tol: float):
        s0, correction = float(s0), float(correction)
        super().__init__(
            f"re-orthonormalization correction {correction!r} > {tol!r} at s = {s0!r}; "
            "reduce the step size"
        )
        self.s0 = float(s0)
        self.correction = float(correction)
        self.tol = float(tol)


class ExhaustedRetriesError(HelixLabError):
    def __init__(self, attempts: int):
        super().__init__(f"could not build an initial frame after {attempts} restarts")
        self.attempts = int(attempts)
