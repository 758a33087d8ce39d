"""Harmonic curvature functions of a proper curve of order n >= 3.

The recursion generalizes the torsion-to-curvature ratio: h_1 is a signed
ratio of the two top curvatures, and each further h_i combines the previous
two with one derivative of h_{i-1}.  Derivatives are read from jet entries,
never from finite differences of sampled values, because the recursion
divides by curvatures and differencing would compound error into the
detector verdicts.

Two scalar diagnostics drive helix detection: the signed sum of squared
harmonic curvatures, and the residual of the top-derivative rule
h'_{n-2} = k_1 * h_{n-3}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jetmath as jm
from .errors import InsufficientJetOrderError, UnsupportedDimensionError
from .frenet import FrenetSeries
from .jets import Jet


@dataclass(frozen=True)
class HarmonicProfile:
    """Harmonic curvatures and diagnostics at one sample."""

    s: float
    h: tuple[Jet, ...]            # h_0 .. h_{n-2}; h_0 is identically 0
    k1: float
    signs: tuple[int, ...]
    square_sum: float             # sum_i eps_{n-(i+2)} h_i^2
    rule_residual: float          # h'_{n-2} - k_1 h_{n-3}


@dataclass
class HarmonicSeries:
    """Harmonic curvature jets along the grid: h_jets[i] is (P, L_i)."""

    grid: np.ndarray
    signs: tuple[int, ...]
    h_jets: list[np.ndarray]
    frenet: FrenetSeries = field(repr=False)

    def __len__(self) -> int:
        return self.grid.shape[0]

    @property
    def dimension(self) -> int:
        return len(self.signs)

    @property
    def h_values(self) -> np.ndarray:
        """(P, n-1): values of h_0 .. h_{n-2}."""
        return np.stack([h[:, 0] for h in self.h_jets], axis=1)

    @property
    def k1_values(self) -> np.ndarray:
        return self.frenet.curvature_jets[0][:, 0]

    def __getitem__(self, p: int) -> HarmonicProfile:
        s = float(self.grid[p])
        return HarmonicProfile(
            s=s,
            h=tuple(Jet(s, h[p]) for h in self.h_jets),
            k1=float(self.k1_values[p]),
            signs=self.signs,
            square_sum=float(square_sum(self)[p]),
            rule_residual=float(derivative_rule_residual(self)[p]),
        )


def harmonic_stacks(curvature_jets: list[np.ndarray], signs, n: int) -> list[np.ndarray]:
    """The harmonic recursion over stacked curvature jets.

    curvature_jets[i] holds k_{i+1} as (P, L_i).  Returns h_0..h_{n-2},
    h_0 identically zero.  Each step past h_1 consumes one jet order.
    """
    if n < 3:
        raise UnsupportedDimensionError(
            f"harmonic curvatures need dimension >= 3, got {n}"
        )
    e = [int(x) for x in signs]

    def k(idx: int) -> np.ndarray:  # 1-based curvature index
        return curvature_jets[idx - 1]

    h1 = float(e[n - 3] * e[n - 2]) * jm.div(*jm.match(k(n - 1), k(n - 2)))
    H: list[np.ndarray] = [np.zeros_like(h1), h1]
    for i in range(2, n - 1):
        if H[i - 1].shape[-1] < 2:
            raise InsufficientJetOrderError(1, 0, f"derivative of h_{i - 1}")
        dH = jm.diff(H[i - 1])
        t = jm.mul(*jm.match(k(n - i), H[i - 2]))
        a, b = jm.match(t, dH)
        num = a - b
        coef = float(e[n - i - 2] * e[n - i - 1])
        H.append(coef * jm.div(*jm.match(num, k(n - i - 1))))
    if H[n - 2].shape[-1] < 2:
        raise InsufficientJetOrderError(1, 0, f"derivative of h_{n - 2}")
    return H


def harmonic_profile(series: FrenetSeries) -> HarmonicSeries:
    """Harmonic curvature jets along a frame series."""
    H = harmonic_stacks(series.curvature_jets, series.signs, series.dimension)
    return HarmonicSeries(grid=series.grid, signs=series.signs, h_jets=H, frenet=series)


def square_sum(hs: HarmonicSeries) -> np.ndarray:
    """Signed sum of squared harmonic curvature values, per sample."""
    n = hs.dimension
    e = hs.signs
    acc = np.zeros(len(hs))
    for i in range(1, n - 1):
        acc = acc + e[n - i - 2] * hs.h_jets[i][:, 0] ** 2
    return acc


def derivative_rule_residual(hs: HarmonicSeries) -> np.ndarray:
    """h'_{n-2} - k_1 * h_{n-3}, per sample (the helix derivative rule)."""
    n = hs.dimension
    top = hs.h_jets[n - 2]
    if top.shape[-1] < 2:
        raise InsufficientJetOrderError(1, 0, f"derivative of h_{n - 2}")
    return top[:, 1] - hs.k1_values * hs.h_jets[n - 3][:, 0]


def recursion_identity_residuals(hs: HarmonicSeries) -> dict[str, np.ndarray]:
    """Unconditional internal-consistency identities of the recursion.

    These hold for every proper curve, helix or not; the suite verifies
    them numerically on everything it analyzes.  Keys:

    * ``first`` (n >= 4): h'_1 + eps_{n-4} eps_{n-3} k_{n-3} h_2
    * ``interior_i`` (2 <= i <= n-3): the chained identity relating h'_i
      to k-weighted neighbours.
    """
    n = hs.dimension
    e = hs.signs
    K = hs.frenet.curvature_jets

    def k(idx: int) -> np.ndarray:
        return K[idx - 1]

    out: dict[str, np.ndarray] = {}
    if n >= 4:
        h1 = hs.h_jets[1]
        if h1.shape[-1] < 2:
            raise InsufficientJetOrderError(1, 0, "derivative of h_1")
        out["first"] = h1[:, 1] + e[n - 4] * e[n - 3] * k(n - 3)[:, 0] * hs.h_jets[2][:, 0]
    for i in range(2, n - 2):
        hi = hs.h_jets[i]
        if hi.shape[-1] < 2:
            raise InsufficientJetOrderError(1, 0, f"derivative of h_{i}")
        ee = e[n - i - 3] * e[n - i - 2]
        lhs = ee * hi[:, 1]
        rhs = ee * k(n - i - 1)[:, 0] * hs.h_jets[i - 1][:, 0] - k(n - i - 2)[:, 0] * hs.h_jets[i + 1][:, 0]
        out[f"interior_{i}"] = lhs - rhs
    return out
