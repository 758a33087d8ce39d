"""Moving frame, curvatures and frame signs of a proper curve of order n.

The frame is built by the coupled recursion (derivative plus sign-weighted
correction term, then metric normalization), carried entirely in jets so
that downstream derivatives are exact.  Each level consumes one derivative
order; the returned jets record their effective order through their length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jetmath as jm
from .config import Config
from .errors import (
    DegenerateCurvatureError,
    FrenetClosureError,
    InsufficientJetOrderError,
    NullFrameVectorError,
    SignFlipError,
    SpecValidationError,
    UnitSpeedError,
)
from .jets import CurveSpec, Jet, JetVector, curve_jets_grid, unit_speed_check
from .metric import MetricSignature


@dataclass(frozen=True)
class FrenetData:
    """Frame vectors, curvatures and signs at one parameter value."""

    s: float
    frames: tuple[JetVector, ...]      # V_1..V_n, each with its own jet order
    curvatures: tuple[Jet, ...]        # k_1..k_{n-1}, positive
    signs: tuple[int, ...]             # g(V_j, V_j) for j = 1..n
    orthonormality_defect: float
    closure_residual: float

    @property
    def dimension(self) -> int:
        return len(self.frames)

    @property
    def frame_values(self) -> np.ndarray:
        return np.stack([v.values for v in self.frames])

    @property
    def curvature_values(self) -> np.ndarray:
        return np.array([k.value for k in self.curvatures])


@dataclass
class FrenetSeries:
    """Frame field along a sample grid, stored as stacked jet arrays.

    frame_jets[i] has shape (P, n, L_i) and holds V_{i+1}; curvature_jets[i]
    has shape (P, L'_i) and holds k_{i+1}.  Orders shrink with the level.
    """

    grid: np.ndarray
    metric: MetricSignature
    signs: tuple[int, ...]
    frame_jets: list[np.ndarray]
    curvature_jets: list[np.ndarray]
    orthonormality_defect: float
    closure_residual: float
    source: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.grid.shape[0]

    @property
    def dimension(self) -> int:
        return self.metric.n

    @property
    def frame_values(self) -> np.ndarray:
        """(P, n, n): row i is V_{i+1} at each sample."""
        return np.stack([v[:, :, 0] for v in self.frame_jets], axis=1)

    @property
    def curvature_values(self) -> np.ndarray:
        """(P, n-1)."""
        return np.stack([k[:, 0] for k in self.curvature_jets], axis=1)

    def __getitem__(self, p: int) -> FrenetData:
        return FrenetData(
            s=float(self.grid[p]),
            frames=tuple(
                JetVector(float(self.grid[p]), v[p]) for v in self.frame_jets
            ),
            curvatures=tuple(
                Jet(float(self.grid[p]), k[p]) for k in self.curvature_jets
            ),
            signs=self.signs,
            orthonormality_defect=self.orthonormality_defect,
            closure_residual=self.closure_residual,
        )


def _extract_sign(values: np.ndarray, grid: np.ndarray, level: int) -> int:
    """Constant sign of g(V, V) along the grid, or SignFlipError."""
    signs = np.where(values >= 0.0, 1, -1)
    if not np.all(signs == signs[0]):
        flip = int(np.argmax(signs != signs[0]))
        raise SignFlipError(grid[flip], level)
    return int(signs[0])


def _orthonormality_defect(frame_values: np.ndarray, eta: np.ndarray, signs) -> float:
    gram = np.einsum("pin,n,pjn->pij", frame_values, eta, frame_values)
    return float(np.max(np.abs(gram - np.diag(np.asarray(signs, dtype=np.float64)))))


def frenet_stacks(curve: np.ndarray, metric: MetricSignature, grid: np.ndarray, cfg: Config):
    """Frame recursion over stacked curve jets (P, n, m+1).

    Returns (frame_jets, curvature_jets, signs, orthonormality_defect,
    closure_residual).
    """
    P, n, L = curve.shape
    m = L - 1
    if m < n + 2:
        raise InsufficientJetOrderError(n + 2, m, "frame recursion")
    eta = metric.eta_array

    signs: list[int] = []
    V: list[np.ndarray] = []
    K: list[np.ndarray] = []

    V1 = jm.diff(curve)
    g11 = jm.inner(V1, V1, eta)
    signs.append(_extract_sign(g11[:, 0], grid, 1))
    V.append(V1)

    for i in range(1, n):
        dV = jm.diff(V[i - 1])
        if i == 1:
            W = dV
        else:
            corr = float(signs[i - 2] * signs[i - 1]) * jm.mul(
                *jm.match(K[i - 2][:, None, :], V[i - 2])
            )
            a, b = jm.match(dV, corr)
            W = a + b
        gWW = jm.inner(W, W, eta)
        eucl2 = np.einsum("pj,pj->p", W[:, :, 0], W[:, :, 0])
        null = (np.abs(gWW[:, 0]) <= cfg.null_tol * eucl2) & (
            np.sqrt(eucl2) > cfg.curvature_floor
        )
        if null.any():
            raise NullFrameVectorError(grid[int(np.argmax(null))], i + 1)
        k0 = np.sqrt(np.abs(gWW[:, 0]))
        small = k0 < cfg.curvature_floor
        if small.any():
            p = int(np.argmax(small))
            raise DegenerateCurvatureError(grid[p], i, k0[p])
        k = jm.sqrt_abs(gWW)
        Vn, kb = jm.match(W, k[:, None, :])
        Vnext = jm.div(Vn, kb)
        gnext = jm.inner(Vnext, Vnext, eta)
        signs.append(_extract_sign(gnext[:, 0], grid, i + 1))
        V.append(Vnext)
        K.append(k)

    # closure of the frame system: the derivative of the last vector must be
    # fully absorbed by the correction term
    dVn = jm.diff(V[n - 1])
    corr = float(signs[n - 2] * signs[n - 1]) * jm.mul(
        *jm.match(K[n - 2][:, None, :], V[n - 2])
    )
    a, b = jm.match(dVn, corr)
    r = a + b
    res = np.sqrt(np.einsum("pj,pj->p", r[:, :, 0], r[:, :, 0]))
    closure = float(np.max(res))
    if closure > cfg.residual_tol:
        raise FrenetClosureError(grid[int(np.argmax(res))], closure, cfg.residual_tol)

    frame_values = np.stack([v[:, :, 0] for v in V], axis=1)
    defect = _orthonormality_defect(frame_values, eta, signs)

    return V, K, tuple(signs), defect, closure


def frenet_series(
    spec: CurveSpec,
    cfg: Config | None = None,
    grid: np.ndarray | None = None,
    jet_order: int | None = None,
) -> FrenetSeries:
    """Frame field of a unit-speed curve over its sample grid."""
    cfg = cfg or Config()
    if jet_order is not None:
        cfg = cfg.replace(jet_order=jet_order)
    if grid is None:
        grid = spec.grid()
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    order = cfg.resolve_jet_order(spec.dimension)

    deviation = unit_speed_check(spec, grid, null_tol=cfg.null_tol)
    if deviation > cfg.unit_speed_tol:
        raise UnitSpeedError(deviation, cfg.unit_speed_tol)

    curve = curve_jets_grid(spec, grid, order)
    V, K, signs, defect, closure = frenet_stacks(curve, spec.metric, grid, cfg)
    return FrenetSeries(
        grid=grid,
        metric=spec.metric,
        signs=signs,
        frame_jets=V,
        curvature_jets=K,
        orthonormality_defect=defect,
        closure_residual=closure,
        source={"kind": "expression", "spec": spec.to_dict(),
                "unit_speed_deviation": deviation, "jet_order": order},
    )


def frenet_at(
    spec: CurveSpec,
    s0: float,
    cfg: Config | None = None,
    jet_order: int | None = None,
) -> FrenetData:
    """Frame, curvatures and signs at a single parameter value."""
    cfg = cfg or Config()
    if jet_order is not None:
        cfg = cfg.replace(jet_order=jet_order)
    order = cfg.resolve_jet_order(spec.dimension)
    lo, hi = spec.domain
    if not (lo <= s0 <= hi):
        raise SpecValidationError(f"s0 = {s0!r} outside domain [{lo}, {hi}]")
    grid = np.array([float(s0)])
    curve = curve_jets_grid(spec, grid, order)
    V, K, signs, defect, closure = frenet_stacks(curve, spec.metric, grid, cfg)
    series = FrenetSeries(
        grid=grid,
        metric=spec.metric,
        signs=signs,
        frame_jets=V,
        curvature_jets=K,
        orthonormality_defect=defect,
        closure_residual=closure,
    )
    return series[0]
