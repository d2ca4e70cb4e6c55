"""Bandwidth selectors for the vMF kernel estimator.

Implemented: the circular rule-of-thumb (Taylor plug-in), the
hypersphere rule-of-thumb (vMF plug-in with q = d-1), likelihood
cross-validation and least-squares cross-validation, plus the shared
1-d optimizer (coarse log grid scan then golden-section refinement).
Selectors never return a value outside the configured search range;
an optimum clamped to an endpoint is reported with converged=False.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bessel import log_bessel_i
from .density import log_vmf_const
from .errors import (
    DegenerateSampleError,
    DimMismatchError,
    EmptySampleError,
    NonFiniteScoreError,
)

DEFAULT_RANGE = (0.02, 5.0)

ROT_CIRC = "rot-circ"
ROT_HYPER = "rot-hyper"
LCV = "lcv"
LSCV = "lscv"
SELECTOR_IDS = (ROT_CIRC, ROT_HYPER, LCV, LSCV)


@dataclass
class BandwidthResult:
    h: float
    selector: str
    score: float
    search_range: tuple
    converged: bool
    note: str = ""


def mean_resultant_length(sample: np.ndarray) -> float:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    return float(np.linalg.norm(sample.mean(axis=0)))


def estimate_vmf_concentration(sample: np.ndarray) -> float:
    """MLE concentration: solve A_d(kappa) = Rbar with A_d = I_{d/2} / I_{d/2-1}.

    Root-bracketed around the Banerjee approximation
    kappa ~= Rbar (d - Rbar^2) / (1 - Rbar^2).
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[0] < 2:
        raise EmptySampleError("concentration estimate needs n >= 2")
    d = sample.shape[1]
    rbar = mean_resultant_length(sample)
    if rbar > 1.0 - 1e-12:
        raise DegenerateSampleError("all points (numerically) identical")
    if rbar < 1e-12:
        return 0.0

    nu = d / 2.0 - 1.0

    def gap(kappa):
        return math.exp(log_bessel_i(nu + 1.0, kappa) - log_bessel_i(nu, kappa)) - rbar

    center = rbar * (d - rbar**2) / (1.0 - rbar**2)
    lo, hi = center / 4.0, center * 4.0
    while gap(lo) > 0 and lo > 1e-14:
        lo /= 4.0
    while gap(hi) < 0 and hi < 1e12:
        hi *= 4.0
    return float(brentq(gap, lo, hi, rtol=1e-10))


def _clamp(h: float, search_range) -> tuple[float, bool]:
    lo, hi = search_range
    if h <= lo:
        return lo, False
    if h >= hi:
        return hi, False
    return h, True


def rot_circular_bandwidth(n: int, kappa: float) -> float:
    """Taylor circular rule-of-thumb as a function of (n, kappa-hat):
    smoothing concentration nu = [3 n k^2 I_2(2k) / (4 sqrt(pi) I_0(k)^2)]^{2/5},
    bandwidth h = nu^{-1/2}."""
    if kappa < 1e-12:
        return math.inf
    log_nu = 0.4 * (
        math.log(3.0 * n)
        + 2.0 * math.log(kappa)
        + log_bessel_i(2.0, 2.0 * kappa)
        - math.log(4.0)
        - 0.5 * math.log(math.pi)
        - 2.0 * log_bessel_i(0.0, kappa)
    )
    return math.exp(-0.5 * log_nu)


def select_rot_circular(sample: np.ndarray, search_range=DEFAULT_RANGE) -> BandwidthResult:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[1] != 2:
        raise DimMismatchError("circular rule-of-thumb requires d == 2")
    kappa = estimate_vmf_concentration(sample)
    note = "uniform data: kappa-hat = 0" if kappa < 1e-12 else ""
    h, converged = _clamp(rot_circular_bandwidth(sample.shape[0], kappa), search_range)
    return BandwidthResult(h, ROT_CIRC, math.nan, tuple(search_range), converged, note=note)


def rot_hypersphere_bandwidth(n: int, kappa: float, d: int) -> float:
    """Hypersphere vMF plug-in rule-of-thumb as a function of (n, kappa-hat, d),
    with q = d-1:

    h = [4 sqrt(pi) I_{(q-1)/2}(k)^2 /
         (k^{(q+1)/2} (2q I_{(q+1)/2}(2k) + (2+q) k I_{(q+3)/2}(2k)) n)]^{1/(4+q)}
    """
    if kappa < 1e-12:
        return math.inf
    q = d - 1
    log_num = math.log(4.0) + 0.5 * math.log(math.pi) + 2.0 * log_bessel_i((q - 1) / 2.0, kappa)
    t1 = math.log(2.0 * q) + log_bessel_i((q + 1) / 2.0, 2.0 * kappa)
    t2 = math.log((2.0 + q) * kappa) + log_bessel_i((q + 3) / 2.0, 2.0 * kappa)
    peak = max(t1, t2)
    log_den = (
        (q + 1) / 2.0 * math.log(kappa)
        + peak + math.log(math.exp(t1 - peak) + math.exp(t2 - peak))
        + math.log(n)
    )
    return math.exp((log_num - log_den) / (4.0 + q))


def select_rot_hypersphere(sample: np.ndarray, search_range=DEFAULT_RANGE) -> BandwidthResult:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    n, d = sample.shape
    kappa = estimate_vmf_concentration(sample)
    if kappa < 1e-12:
        # formula degenerates at kappa = 0; fall back to LCV as flagged
        res = select_lcv(sample, search_range)
        return BandwidthResult(res.h, ROT_HYPER, res.score, tuple(search_range),
                               res.converged, note="kappa-hat = 0: fell back to lcv")
    h, converged = _clamp(rot_hypersphere_bandwidth(n, kappa, d), search_range)
    return BandwidthResult(h, ROT_HYPER, math.nan, tuple(search_range), converged)


class _CvScores:
    """Cross-validation scores sharing one cached Gram matrix."""

    def __init__(self, sample: np.ndarray):
        sample = np.atleast_2d(np.asarray(sample, dtype=float))
        self.sample = sample
        self.n, self.d = sample.shape
        self.gram = sample @ sample.T
        # ||X_i + X_j|| for the squared-integral closed form (diagonal = 2)
        self.pair_norms = np.sqrt(np.clip(2.0 + 2.0 * self.gram, 0.0, None)).ravel()

    def loo_log_densities(self, h: float) -> np.ndarray:
        if self.n < 2:
            raise EmptySampleError("cross-validation needs n >= 2")
        kappa = 1.0 / h**2
        g = kappa * self.gram
        np.fill_diagonal(g, -np.inf)
        peak = g.max(axis=1)
        lse = peak + np.log(np.exp(g - peak[:, None]).sum(axis=1))
        logf = log_vmf_const(self.d, kappa) + lse - math.log(self.n - 1)
        return logf

    def lcv(self, h: float) -> float:
        return float(self.loo_log_densities(h).sum())

    def squared_integral(self, h: float) -> float:
        kappa = 1.0 / h**2
        log_terms = 2.0 * log_vmf_const(self.d, kappa) - log_vmf_const(
            self.d, kappa * self.pair_norms
        )
        peak = log_terms.max()
        return float(np.exp(peak) * np.exp(log_terms - peak).sum() / self.n**2)

    def lscv(self, h: float) -> float:
        loo = np.exp(self.loo_log_densities(h))
        return self.squared_integral(h) - 2.0 / self.n * float(loo.sum())


def lcv_score(sample: np.ndarray, h: float) -> float:
    """Likelihood CV criterion: sum_i log f_{n,-i}(X_i) (maximize)."""
    return _CvScores(sample).lcv(h)


def lscv_score(sample: np.ndarray, h: float) -> float:
    """Least-squares CV criterion: int f_n^2 - (2/n) sum_i f_{n,-i}(X_i) (minimize)."""
    return _CvScores(sample).lscv(h)


def kde_squared_integral(sample: np.ndarray, h: float) -> float:
    """Closed-form int f_n^2 from the vMF product identity:
    (1/n^2) sum_{i,j} C_d(k)^2 / C_d(k ||X_i + X_j||)."""
    return _CvScores(sample).squared_integral(h)


def optimize_1d(score, search_range, mode: str, *, grid_points=25, rel_tol=1e-4,
                max_iter=100):
    """Coarse log-grid scan then golden-section refinement on log h.

    Returns (h, score_at_h, converged); a boundary optimum reports
    converged=False.  The result is never worse than the best coarse
    grid point.
    """
    lo, hi = search_range
    if not (0 < lo < hi):
        raise ValueError("need 0 < h_lo < h_hi")
    if mode not in ("max", "min"):
        raise ValueError("mode must be 'max' or 'min'")
    sign = -1.0 if mode == "max" else 1.0

    grid = np.geomspace(lo, hi, grid_points)
    with ThreadPoolExecutor(max_workers=4) as pool:
        values = list(pool.map(score, grid))
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteScoreError("score returned a non-finite value on the grid")
    signed = sign * values
    best = int(np.argmin(signed))
    if best in (0, grid_points - 1):
        return float(grid[best]), float(values[best]), False

    # golden-section on log h inside the bracketing grid cells
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(grid[best - 1]), math.log(grid[best + 1])
    c = b - invphi * (b - a)
    d_pt = a + invphi * (b - a)
    fc = sign * score(math.exp(c))
    fd = sign * score(math.exp(d_pt))
    best_log, best_val = math.log(grid[best]), signed[best]
    for _ in range(max_iter):
        if b - a <= rel_tol:
            break
        if fc < fd:
            b, d_pt, fd = d_pt, c, fc
            c = b - invphi * (b - a)
            fc = sign * score(math.exp(c))
        else:
            a, c, fc = c, d_pt, fd
            d_pt = a + invphi * (b - a)
            fd = sign * score(math.exp(d_pt))
        for pt, val in ((c, fc), (d_pt, fd)):
            if math.isfinite(val) and val < best_val:
                best_log, best_val = pt, val
    if not (math.isfinite(fc) and math.isfinite(fd)):
        raise NonFiniteScoreError("score returned a non-finite value during refinement")
    return math.exp(best_log), float(sign * best_val), True


def select_lcv(sample: np.ndarray, search_range=DEFAULT_RANGE) -> BandwidthResult:
    scores = _CvScores(sample)
    h, value, converged = optimize_1d(scores.lcv, search_range, "max")
    return BandwidthResult(h, LCV, value, tuple(search_range), converged)


def select_lscv(sample: np.ndarray, search_range=DEFAULT_RANGE) -> BandwidthResult:
    scores = _CvScores(sample)
    h, value, converged = optimize_1d(scores.lscv, search_range, "min")
    return BandwidthResult(h, LSCV, value, tuple(search_range), converged)


def select_bandwidth(sample: np.ndarray, selector, search_range=DEFAULT_RANGE) -> BandwidthResult:
    """Dispatch a selector id or a literal numeric bandwidth."""
    if isinstance(selector, (int, float)) and not isinstance(selector, bool):
        h = float(selector)
        if h <= 0:
            raise ValueError("literal bandwidth must be positive")
        return BandwidthResult(h, "literal", math.nan, tuple(search_range), True)
    if isinstance(selector, str):
        try:
            return select_bandwidth(sample, float(selector), search_range)
        except ValueError as exc:
            if "literal bandwidth" in str(exc):
                raise
        if selector == ROT_CIRC:
            return select_rot_circular(sample, search_range)
        if selector == ROT_HYPER:
            return select_rot_hypersphere(sample, search_range)
        if selector == LCV:
            return select_lcv(sample, search_range)
        if selector == LSCV:
            return select_lscv(sample, search_range)
    raise ValueError(f"unknown bandwidth selector: {selector!r}")
