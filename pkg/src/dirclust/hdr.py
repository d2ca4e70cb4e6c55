"""Empirical highest density regions: quantile thresholds and membership.

The threshold for probability content 1-tau is the tau-quantile of the
density values at the sample points, taken as the lower order statistic
d_(floor(tau*n)) (zero when the index is zero).  This guarantees at
least n*(1-tau) sample points sit at or above the threshold.
"""

from dataclasses import dataclass

import numpy as np

from .density import DensityModel, VmfMixture, sphere_quadrature
from .errors import EmptySampleError


@dataclass(frozen=True)
class TauGrid:
    """Strictly increasing probability-content grid in (0, 1)."""

    taus: tuple

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        if taus.size == 0 or np.any(taus <= 0) or np.any(taus >= 1):
            raise ValueError("taus must lie strictly inside (0, 1)")
        if np.any(np.diff(taus) <= 0):
            raise ValueError("taus must be strictly increasing")
        object.__setattr__(self, "taus", tuple(float(t) for t in taus))

    @classmethod
    def default(cls) -> "TauGrid":
        return cls(tuple(np.round(np.arange(0.01, 0.995, 0.01), 10)))

    @classmethod
    def from_spec(cls, spec: str) -> "TauGrid":
        """Parse 'lo:hi:step', endpoints inclusive up to rounding."""
        lo, hi, step = (float(part) for part in spec.split(":"))
        count = int(round((hi - lo) / step)) + 1
        return cls(tuple(np.round(lo + step * np.arange(count), 12)))


@dataclass
class HdrSpec:
    tau: float
    threshold: float
    model: DensityModel


def quantile_threshold(values: np.ndarray, tau: float) -> float:
    """Lower order statistic d_(floor(tau*n)); 0 when the index is 0."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n == 0:
        raise EmptySampleError("no density values to take a quantile of")
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    k = int(np.floor(tau * n))
    if k == 0:
        return 0.0
    return float(np.sort(values)[k - 1])


def estimate_threshold(model: DensityModel, sample: np.ndarray, tau: float) -> HdrSpec:
    """HDR threshold from the empirical density-value distribution."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[0] == 0:
        raise EmptySampleError("empty sample")
    values = np.exp(model.log_density(sample))
    return HdrSpec(tau=float(tau), threshold=quantile_threshold(values, tau), model=model)


def hdr_contains(spec: HdrSpec, x: np.ndarray) -> bool:
    """Whether x lies in the estimated HDR (density >= threshold, inclusive)."""
    return bool(np.exp(spec.model.log_density(np.asarray(x, dtype=float))) >= spec.threshold)


def hdr_mask(spec: HdrSpec, sample: np.ndarray) -> np.ndarray:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    return np.exp(spec.model.log_density(sample)) >= spec.threshold


def level_for_tau(model: DensityModel, sample: np.ndarray, grid: TauGrid) -> list:
    """(tau, threshold) pairs over the grid; thresholds are nondecreasing."""
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[0] == 0:
        raise EmptySampleError("empty sample")
    values = np.sort(np.exp(model.log_density(sample)))
    n = values.shape[0]
    out = []
    for tau in grid.taus:
        k = int(np.floor(tau * n))
        out.append((tau, 0.0 if k == 0 else float(values[k - 1])))
    return out


def mixture_threshold(model: VmfMixture, tau: float, resolution=None, tol: float = 1e-4) -> float:
    """Population HDR threshold for an analytic mixture.

    Bisects the level t so the probability content P(f >= t), computed
    by quadrature weighted by the density itself, matches 1-tau within
    `tol` (largest such t).  Only d in {2, 3}.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    nodes, weights = sphere_quadrature(model.dim, resolution)
    f = np.exp(model.log_density(nodes))
    mass = f * weights
    target = 1.0 - tau
    lo, hi = 0.0, float(f.max())
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        content = float(mass[f >= mid].sum())
        if content >= target:
            lo = mid
        else:
            hi = mid
        if abs(content - target) <= tol and content >= target:
            return mid
    return lo
