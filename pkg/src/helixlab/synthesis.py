"""Manufacture unit-speed curves by integrating the frame system.

Given positive curvature functions and a sign pattern, classical RK4
integrates the coupled (point, frame) system; after every step the frame is
re-orthonormalized by indefinite Gram-Schmidt and the correction magnitude
recorded, so drift is measured and bounded instead of assumed away.  The
result is unit-speed by construction and supplies ground-truth positive and
negative instances for the detectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from . import expressions as ex
from ._backend.codes import (
    STATUS_DRIFT,
    STATUS_NULL_FRAME,
    STATUS_OK,
    STATUS_SIGN_FLIP,
)
from .config import Config
from .errors import (
    DegenerateCurvatureError,
    DriftError,
    ExhaustedRetriesError,
    NullFrameVectorError,
    SignFlipError,
    SpecValidationError,
    UnsupportedDimensionError,
)
from .jets import eval_values
from .metric import MetricSignature


@dataclass(frozen=True)
class CurvatureSpec:
    """Curvature functions, sign pattern and integration window."""

    metric: MetricSignature
    curvature_exprs: tuple[ex.Expr, ...]   # k_1 .. k_{n-1}, positive on the domain
    signs: tuple[int, ...]                 # intended g(V_j, V_j) pattern
    domain: tuple[float, float]
    step: float = 1e-3
    seed: int = 0
    curvature_texts: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.metric.n
        if len(self.curvature_exprs) != n - 1:
            raise SpecValidationError(
                f"{len(self.curvature_exprs)} curvature functions for dimension {n}"
            )
        if len(self.signs) != n or any(e not in (1, -1) for e in self.signs):
            raise SpecValidationError(f"bad sign pattern {self.signs}")
        if sorted(self.signs) != sorted(self.metric.eta):
            raise SpecValidationError(
                f"sign pattern {self.signs} incompatible with metric {self.metric.eta}"
            )
        lo, hi = self.domain
        if not (lo < hi):
            raise SpecValidationError(f"empty domain [{lo}, {hi}]")
        if self.step <= 0.0:
            raise SpecValidationError(f"step must be > 0, got {self.step}")

    @property
    def dimension(self) -> int:
        return self.metric.n

    @classmethod
    def from_dict(cls, data: dict) -> "CurvatureSpec":
        try:
            n = int(data["dimension"])
            eta = tuple(int(e) for e in data["metric"])
            exprs = tuple(str(c) for c in data["curvatures"])
            signs = tuple(int(e) for e in data["signs"])
            domain = (float(data["domain"][0]), float(data["domain"][1]))
            step = float(data.get("step", 1e-3))
            seed = int(data.get("seed", 0))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SpecValidationError(f"bad curvature spec: {exc}") from exc
        if n != len(eta):
            raise SpecValidationError(f"dimension {n} does not match metric {eta}")
        return cls(
            metric=MetricSignature(eta),
            curvature_exprs=tuple(ex.parse_expr(c) for c in exprs),
            signs=signs,
            domain=domain,
            step=step,
            seed=seed,
            curvature_texts=exprs,
        )

    def to_dict(self) -> dict:
        texts = self.curvature_texts or tuple(ex.pretty(c) for c in self.curvature_exprs)
        return {
            "dimension": self.metric.n,
            "metric": list(self.metric.eta),
            "curvatures": list(texts),
            "signs": list(self.signs),
            "domain": [self.domain[0], self.domain[1]],
            "step": self.step,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class InitialFrame:
    """Pseudo-orthonormal starting frame with a prescribed sign pattern."""

    point: np.ndarray
    vectors: np.ndarray  # (n, n), row j is V_{j+1}

    def orthonormality_defect(self, g: MetricSignature, signs) -> float:
        gram = np.einsum("in,n,jn->ij", self.vectors, g.eta_array, self.vectors)
        return float(np.max(np.abs(gram - np.diag(np.asarray(signs, dtype=np.float64)))))


@dataclass
class SampledCurve:
    """Dense samples of a synthesized curve plus its frame history."""

    s: np.ndarray                  # (P,)
    points: np.ndarray             # (P, n)
    frames: np.ndarray             # (P, n, n)
    signs: tuple[int, ...]
    metric: MetricSignature
    step: float
    corrections: np.ndarray        # (P-1,) per-step re-orthonormalization size
    source: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.s.shape[0]

    @property
    def dimension(self) -> int:
        return self.metric.n


def standard_initial_frame(g: MetricSignature, signs) -> InitialFrame:
    """Non-random fallback: coordinate axes permuted to match the signs."""
    signs = tuple(int(e) for e in signs)
    if sorted(signs) != sorted(g.eta):
        raise SpecValidationError(f"sign pattern {signs} incompatible with metric {g.eta}")
    used = [False] * g.n
    vectors = np.zeros((g.n, g.n))
    for i, want in enumerate(signs):
        for j in range(g.n):
            if not used[j] and g.eta[j] == want:
                used[j] = True
                vectors[i, j] = 1.0
                break
    return InitialFrame(point=np.zeros(g.n), vectors=vectors)


def random_initial_frame(
    g: MetricSignature, signs, seed: int, max_restarts: int = 100
) -> InitialFrame:
    """Seeded indefinite Gram-Schmidt on random vectors, redrawing whenever a
    candidate comes out null or with the wrong causal type."""
    signs = tuple(int(e) for e in signs)
    if sorted(signs) != sorted(g.eta):
        raise SpecValidationError(f"sign pattern {signs} incompatible with metric {g.eta}")
    rng = np.random.default_rng(seed)
    eta = g.eta_array
    vectors = np.zeros((g.n, g.n))
    restarts = 0
    i = 0
    while i < g.n:
        w = rng.standard_normal(g.n)
        for l in range(i):
            w = w - signs[l] * float(np.dot(eta * w, vectors[l])) * vectors[l]
        q = float(np.dot(eta * w, w))
        eucl = float(np.dot(w, w))
        if eucl == 0.0 or abs(q) <= 1e-9 * eucl or (q > 0) != (signs[i] > 0):
            restarts += 1
            if restarts > max_restarts:
                raise ExhaustedRetriesError(max_restarts)
            continue
        vectors[i] = w / math.sqrt(abs(q))
        i += 1
    return InitialFrame(point=np.zeros(g.n), vectors=vectors)


def _curvature_grid(spec: CurvatureSpec, cfg: Config) -> tuple[np.ndarray, np.ndarray, float, int]:
    """Curvature values on the RK4 half-step grid, validated positive."""
    lo, hi = spec.domain
    steps = max(1, round((hi - lo) / spec.step))
    h = (hi - lo) / steps
    half = np.linspace(lo, hi, 2 * steps + 1)
    kgrid = np.empty((spec.dimension - 1, half.shape[0]))
    for i, expr in enumerate(spec.curvature_exprs):
        kgrid[i] = eval_values(expr, half)
        bad = kgrid[i] <= cfg.curvature_floor
        if bad.any():
            p = int(np.argmax(bad))
            raise DegenerateCurvatureError(half[p], i + 1, kgrid[i][p])
    return kgrid, half, h, steps


def integrate_frenet(
    spec: CurvatureSpec,
    init: InitialFrame | None = None,
    cfg: Config | None = None,
) -> SampledCurve:
    """Integrate the coupled frame system with prescribed curvatures.

    Uses the spec's seed to draw the initial frame when none is given.  The
    output grid is uniform with the step rounded so the domain divides
    evenly.  Raises DriftError when a single re-orthonormalization moves the
    frame by more than the drift tolerance.
    """
    cfg = cfg or Config()
    if init is None:
        init = random_initial_frame(spec.metric, spec.signs, spec.seed)
    defect = init.orthonormality_defect(spec.metric, spec.signs)
    if defect > 1e-10:
        raise SpecValidationError(
            f"initial frame is not pseudo-orthonormal (defect {defect:.3e})"
        )
    kgrid, half, h, steps = _curvature_grid(spec, cfg)

    n = spec.dimension
    y0 = np.zeros((n + 1, n))
    y0[0] = init.point
    y0[1:] = init.vectors
    signs_arr = np.asarray(spec.signs, dtype=np.int64)
    kern = _backend.active()
    ys, corrections, status, bad = kern.integrate_loop(
        y0, kgrid, spec.metric.eta_array, signs_arr, h, cfg.null_tol, cfg.drift_tol
    )
    if status != STATUS_OK:
        s_bad = float(half[min(2 * (bad + 1), half.shape[0] - 1)])
        if status == STATUS_DRIFT:
            raise DriftError(s_bad, float(corrections[bad]), cfg.drift_tol)
        if status == STATUS_NULL_FRAME:
            raise NullFrameVectorError(s_bad, -1)
        if status == STATUS_SIGN_FLIP:
            raise SignFlipError(s_bad, -1)
        raise RuntimeError(f"integrator status {status}")  # pragma: no cover

    return SampledCurve(
        s=half[::2].copy(),
        points=ys[:, 0, :].copy(),
        frames=ys[:, 1:, :].copy(),
        signs=spec.signs,
        metric=spec.metric,
        step=h,
        corrections=corrections,
        source={"kind": "sampled", "spec": spec.to_dict(), "steps": steps},
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def slant_family(n: int, **params) -> CurvatureSpec:
    """Built-in positive families that satisfy the derivative rule exactly.

    n = 3: constant curvatures (c1, c2); optional Minkowski metric/signs.
    n = 4: k_1 = c1, k_2 = c2, k_3 = c2 * amplitude * sin(c1 s) on the
    domain (delta, pi/c1 - delta), Euclidean; by construction the harmonic
    curvatures trace a circle of radius ``amplitude``.
    """
    step = float(params.pop("step", 1e-3))
    seed = int(params.pop("seed", 0))
    if n == 3:
        c1 = float(params.pop("c1", 0.4))
        c2 = float(params.pop("c2", 0.2))
        metric = params.pop("metric", None) or MetricSignature.euclidean(3)
        signs = tuple(params.pop("signs", None) or metric.eta)
        domain = tuple(params.pop("domain", (0.0, 2.0 * math.pi)))
        if params:
            raise SpecValidationError(f"unknown family parameters {sorted(params)}")
        if min(c1, c2) <= 0.0:
            raise SpecValidationError("constant curvatures must be positive")
        texts = (_fmt(c1), _fmt(c2))
    elif n == 4:
        c1 = float(params.pop("c1", 1.0))
        c2 = float(params.pop("c2", 1.0))
        amplitude = float(params.pop("amplitude", 0.8))
        delta = float(params.pop("delta", 0.2))
        if params:
            raise SpecValidationError(f"unknown family parameters {sorted(params)}")
        if min(c1, c2, amplitude) <= 0.0:
            raise SpecValidationError("family parameters must be positive")
        if not (0.0 < delta < math.pi / (2.0 * c1)):
            raise SpecValidationError(f"delta {delta} outside (0, pi/(2 c1))")
        metric = MetricSignature.euclidean(4)
        signs = metric.eta
        domain = (delta, math.pi / c1 - delta)
        texts = (
            _fmt(c1),
            _fmt(c2),
            f"{_fmt(c2)}*{_fmt(amplitude)}*sin({_fmt(c1)}*s)",
        )
    else:
        raise UnsupportedDimensionError(
            f"slant family exists for dimensions 3 and 4, not {n}"
        )
    return CurvatureSpec(
        metric=metric,
        curvature_exprs=tuple(ex.parse_expr(t) for t in texts),
        signs=signs,
        domain=(float(domain[0]), float(domain[1])),
        step=step,
        seed=seed,
        curvature_texts=texts,
    )


def negative_family(n: int, kind: str, **params) -> CurvatureSpec:
    """Controls that provably fail detection.

    ``ratio_linear`` (n=3): k_2 / k_1 = s, so the square sum is s^2.
    ``w_curve`` (n=4): all curvatures constant, so the top harmonic
    curvature vanishes identically.
    """
    step = float(params.pop("step", 1e-3))
    seed = int(params.pop("seed", 0))
    if kind == "ratio_linear":
        if n != 3:
            raise UnsupportedDimensionError(f"ratio_linear is a 3-dimensional family, not {n}")
        c1 = float(params.pop("c1", 0.5))
        domain = tuple(params.pop("domain", (0.5, 3.0)))
        if params:
            raise SpecValidationError(f"unknown family parameters {sorted(params)}")
        if domain[0] <= 0.0:
            raise SpecValidationError("ratio_linear needs a positive domain (k_2 = c1*s > 0)")
        metric = MetricSignature.euclidean(3)
        texts = (_fmt(c1), f"{_fmt(c1)}*s")
    elif kind == "w_curve":
        if n != 4:
            raise UnsupportedDimensionError(f"w_curve control is 4-dimensional, not {n}")
        consts = params.pop("curvatures", (1.0, 0.8, 0.6))
        domain = tuple(params.pop("domain", (0.0, 3.0)))
        if params:
            raise SpecValidationError(f"unknown family parameters {sorted(params)}")
        if len(consts) != 3 or min(consts) <= 0.0:
            raise SpecValidationError(f"w_curve needs 3 positive constants, got {consts}")
        metric = MetricSignature.euclidean(4)
        texts = tuple(_fmt(c) for c in consts)
    else:
        raise SpecValidationError(f"unknown negative family {kind!r}")
    return CurvatureSpec(
        metric=metric,
        curvature_exprs=tuple(ex.parse_expr(t) for t in texts),
        signs=metric.eta,
        domain=(float(domain[0]), float(domain[1])),
        step=step,
        seed=seed,
        curvature_texts=texts,
    )
