"""Indefinite inner-product algebra for R^n with a constant diagonal metric.

The metric is fixed by a signature vector eta of +-1 entries; the inner
product of u and v is sum_j eta_j * u_j * v_j.  In this flat setting the
connection is the ordinary componentwise derivative, so every formula in
the rest of the library reduces to jet arithmetic on coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NullVectorError, SpecValidationError

DEFAULT_NULL_TOL = 1e-9


class CausalCharacter(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"


@dataclass(frozen=True)
class MetricSignature:
    """Dimension plus the +-1 diagonal of the metric tensor."""

    eta: tuple[int, ...]

    def __post_init__(self):
        if len(self.eta) < 2:
            raise SpecValidationError(f"dimension must be >= 2, got {len(self.eta)}")
        if any(e not in (1, -1) for e in self.eta):
            raise SpecValidationError(f"signature entries must be +1 or -1, got {self.eta}")
        object.__setattr__(self, "eta", tuple(int(e) for e in self.eta))

    @property
    def n(self) -> int:
        return len(self.eta)

    @property
    def eta_array(self) -> np.ndarray:
        return np.asarray(self.eta, dtype=np.float64)

    @classmethod
    def euclidean(cls, n: int) -> "MetricSignature":
        return cls(tuple([1] * n))

    @classmethod
    def minkowski(cls, n: int) -> "MetricSignature":
        """One timelike direction, first coordinate."""
        return cls(tuple([-1] + [1] * (n - 1)))


def _check_dim(g: MetricSignature, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (g.n,):
        raise DimensionError(f"vector of shape {u.shape} does not match dimension {g.n}")
    return u


def inner(g: MetricSignature, u, v) -> float:
    """Indefinite inner product sum_j eta_j u_j v_j.

    Summation is left to right so the result is reproducible and exactly
    symmetric in u and v.
    """
    u = _check_dim(g, u)
    v = _check_dim(g, v)
    total = 0.0
    for j in range(g.n):
        total += g.eta[j] * u[j] * v[j]
    return total


def norm(g: MetricSignature, u) -> float:
    """sqrt(|g(u,u)|), always >= 0."""
    return math.sqrt(abs(inner(g, u, u)))


def _rescaled(u: np.ndarray) -> np.ndarray:
    """u divided by its largest component, so squares neither underflow nor
    overflow; the zero vector passes through unchanged."""
    c = float(np.max(np.abs(u)))
    return u if c == 0.0 else u / c


def causal_character(g: MetricSignature, u, null_tol: float = DEFAULT_NULL_TOL) -> CausalCharacter:
    """Classify u as spacelike, timelike or null.

    Nullness is judged relative to the Euclidean magnitude of u, so scaling
    a vector never changes its classification (the vector is rescaled
    internally to keep extreme magnitudes inside the floating-point range).
    """
    v = _rescaled(_check_dim(g, u))
    q = inner(g, v, v)
    eucl2 = float(np.dot(v, v))
    if abs(q) <= null_tol * eucl2:
        return CausalCharacter.NULL
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def normalize(g: MetricSignature, u, null_tol: float = DEFAULT_NULL_TOL) -> tuple[np.ndarray, int]:
    """Scale u to unit metric norm; returns (w, sign) with g(w,w) = sign = +-1."""
    u = _check_dim(g, u)
    if causal_character(g, u, null_tol) is CausalCharacter.NULL:
        raise NullVectorError(f"cannot normalize a null vector {u.tolist()}")
    v = _rescaled(u)
    q = inner(g, v, v)
    return v / math.sqrt(abs(q)), (1 if q > 0 else -1)
