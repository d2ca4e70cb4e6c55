"""von Mises-Fisher densities: normalizing constants, kernel estimates,
analytic mixtures, sampling, and validation quadrature.

All densities are with respect to the surface measure on S^{d-1}.  The
kernel estimator at x is the mixture

    f_n(x) = (1/n) * sum_i C_d(kappa) * exp(kappa * x . X_i),

with concentration kappa = 1/h^2.  Sums are evaluated in log space so
they stay finite for any bandwidth; exponentiation back to the density
scale clamps underflow to the smallest positive normal float and counts
the event (see :func:`underflow_count`).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bessel import log_bessel_i
from .errors import (
    DimMismatchError,
    EmptySampleError,
    InvalidDimError,
    NonFiniteError,
    UnsupportedDimError,
)
from .geometry import normalize

_TINY = np.finfo(float).tiny
_KAPPA_UNIFORM = 1e-8

_underflow_events = 0


def underflow_count() -> int:
    """Number of density evaluations clamped to the smallest positive normal."""
    return _underflow_events


def reset_underflow_count() -> None:
    global _underflow_events
    _underflow_events = 0


def _note_underflow(n: int) -> None:
    global _underflow_events
    _underflow_events += n


def log_uniform_density(d: int) -> float:
    """log of 1/area(S^{d-1})."""
    return math.lgamma(d / 2.0) - math.log(2.0) - (d / 2.0) * math.log(math.pi)


def log_vmf_const(d: int, kappa) -> np.ndarray | float:
    """log C_d(kappa) with C_d(kappa) = kappa^{d/2-1} / ((2 pi)^{d/2} I_{d/2-1}(kappa)).

    Continuous at kappa = 0 where it equals the log uniform density.
    Vectorized over kappa.  d = 3 uses the closed form
    log(kappa) - log(4 pi) - log(sinh kappa) with a stable log-sinh.
    """
    if d < 2:
        raise InvalidDimError("d must be >= 2")
    scalar = np.isscalar(kappa) or getattr(kappa, "ndim", 1) == 0
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    if np.any(kappa < 0) or not np.all(np.isfinite(kappa)):
        raise NonFiniteError("kappa must be finite and >= 0")
    out = np.full(kappa.shape, log_uniform_density(d))
    big = kappa >= _KAPPA_UNIFORM
    if big.any():
        k = kappa[big]
        if d == 3:
            # log sinh(k) = k + log1p(-exp(-2k)) - log 2
            log_sinh = k + np.log1p(-np.exp(-2.0 * k)) - math.log(2.0)
            out[big] = np.log(k) - math.log(4.0 * math.pi) - log_sinh
        else:
            nu = d / 2.0 - 1.0
            out[big] = nu * np.log(k) - (d / 2.0) * math.log(2.0 * math.pi) - log_bessel_i(nu, k)
    return float(out[0]) if scalar else out


class DensityModel:
    """Evaluable density on S^{d-1}; see :class:`KernelDensity` and
    :class:`VmfMixture`."""

    dim: int

    def log_density(self, x):
        raise NotImplementedError

    def density(self, x):
        """Exponentiated :meth:`log_density` with underflow clamped to tiny."""
        logf = self.log_density(x)
        out = np.exp(logf)
        under = out == 0.0
        n_under = int(np.count_nonzero(under))
        if n_under:
            _note_underflow(n_under)
            if np.isscalar(out) or out.ndim == 0:
                out = _TINY
            else:
                out[under] = _TINY
        return out

    def _check_dim(self, x: np.ndarray) -> None:
        if x.shape[-1] != self.dim:
            raise DimMismatchError(f"point dim {x.shape[-1]} != model dim {self.dim}")


class KernelDensity(DensityModel):
    """vMF kernel density estimate with bandwidth h (concentration 1/h^2)."""

    def __init__(self, points: np.ndarray, bandwidth: float):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[0] < 1:
            raise EmptySampleError("KDE needs at least one point")
        if bandwidth <= 0 or not math.isfinite(bandwidth):
            raise ValueError("bandwidth must be positive and finite")
        norms = np.linalg.norm(points, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("sample rows must be unit vectors")
        self.points = points
        self.bandwidth = float(bandwidth)
        self.kappa = 1.0 / bandwidth**2
        self.dim = points.shape[1]
        self.n = points.shape[0]
        self._log_const = log_vmf_const(self.dim, self.kappa)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        self._check_dim(x)
        out = self._log_const + _kernels.log_mean_exp_dots(x, self.points, self.kappa)
        return float(out[0]) if single else out

    def log_density_loo(self, i: int) -> float:
        """Leave-one-out log density at X_i: the sum excluding X_i over n-1."""
        return float(self.loo_log_densities(indices=[i])[0])

    def loo_log_densities(self, indices=None) -> np.ndarray:
        """log f_{n,-i}(X_i) for each requested i (all points by default)."""
        if self.n < 2:
            raise EmptySampleError("leave-one-out needs n >= 2")
        if indices is None:
            indices = np.arange(self.n)
        else:
            indices = np.asarray(indices, dtype=int)
            if np.any(indices < 0) or np.any(indices >= self.n):
                raise IndexError("leave-one-out index out of range")
        g = self.kappa * (self.points[indices] @ self.points.T)
        g[np.arange(len(indices)), indices] = -np.inf
        peak = g.max(axis=1)
        lse = peak + np.log(np.exp(g - peak[:, None]).sum(axis=1))
        return self._log_const + lse - np.log(self.n - 1)


class VmfMixture(DensityModel):
    """Finite mixture of vMF components; the analytic densities used for
    population-truth runs and simulation scenarios."""

    def __init__(self, weights, mus, kappas):
        weights = np.asarray(weights, dtype=float)
        mus = np.atleast_2d(np.asarray(mus, dtype=float))
        kappas = np.asarray(kappas, dtype=float)
        if len(weights) != len(mus) or len(weights) != len(kappas):
            raise ValueError("weights, mus, kappas must have equal length")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        self.weights = weights
        self.mus = np.vstack([normalize(mu) for mu in mus])
        self.kappas = kappas
        self.dim = self.mus.shape[1]
        self._log_consts = np.array([log_vmf_const(self.dim, k) for k in kappas])

    @classmethod
    def equal_weights(cls, mus, kappas) -> "VmfMixture":
        k = len(mus)
        return cls(np.full(k, 1.0 / k), mus, kappas)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        self._check_dim(x)
        pts = np.atleast_2d(x)
        # (m, k): log w_j + log C(kappa_j) + kappa_j * x . mu_j
        g = (
            np.log(self.weights)[None, :]
            + self._log_consts[None, :]
            + (pts @ self.mus.T) * self.kappas[None, :]
        )
        peak = g.max(axis=1)
        out = peak + np.log(np.exp(g - peak[:, None]).sum(axis=1))
        return float(out[0]) if single else out


def as_generator(seed) -> np.random.Generator:
    """Coerce int / SeedSequence / Generator / None into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_uniform(d: int, n: int, seed=None) -> np.ndarray:
    """n uniform draws on S^{d-1} via normalized Gaussians."""
    rng = as_generator(seed)
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sample_vmf(mu: np.ndarray, kappa: float, n: int, seed=None) -> np.ndarray:
    """n i.i.d. vMF(mu, kappa) draws, deterministic given the seed.

    Tangent-normal decomposition: the cosine w of the angle to mu is
    drawn by Wood's rejection envelope, the tangent direction uniformly
    in the orthogonal complement.
    """
    mu = normalize(mu)
    d = mu.shape[0]
    rng = as_generator(seed)
    if n == 0:
        return np.empty((0, d))
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    if kappa == 0:
        return sample_uniform(d, n, rng)

    m = d - 1
    b = m / (math.sqrt(4.0 * kappa**2 + m**2) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + m * math.log(1.0 - x0**2)

    w = np.empty(n)
    filled = 0
    while filled < n:
        todo = n - filled
        z = rng.beta(m / 2.0, m / 2.0, size=todo)
        wc = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        u = rng.uniform(size=todo)
        ok = kappa * wc + m * np.log(1.0 - x0 * wc) - c >= np.log(u)
        take = wc[ok]
        w[filled : filled + len(take)] = take
        filled += len(take)

    g = rng.standard_normal((n, d))
    g -= (g @ mu)[:, None] * mu[None, :]
    tnorm = np.linalg.norm(g, axis=1, keepdims=True)
    # a zero tangent draw has probability 0; renormalize defensively
    tnorm[tnorm == 0.0] = 1.0
    v = g / tnorm
    return w[:, None] * mu[None, :] + np.sqrt(np.clip(1.0 - w**2, 0.0, None))[:, None] * v


def sphere_quadrature(d: int, resolution=None):
    """Quadrature nodes and weights covering S^1 or S^2.

    Circle: uniform angle grid (periodic rectangle rule).  Sphere:
    latitude-longitude product rule with sin(phi) weights, midpoint in
    the polar angle to avoid the poles.
    """
    if d == 2:
        m = int(resolution or 10_000)
        theta = np.arange(m) * (2.0 * math.pi / m)
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        weights = np.full(m, 2.0 * math.pi / m)
        return nodes, weights
    if d == 3:
        if resolution is None:
            n_phi, n_theta = 500, 1000
        elif np.isscalar(resolution):
            n_phi, n_theta = int(resolution), 2 * int(resolution)
        else:
            n_phi, n_theta = map(int, resolution)
        phi = (np.arange(n_phi) + 0.5) * (math.pi / n_phi)
        theta = np.arange(n_theta) * (2.0 * math.pi / n_theta)
        pp, tt = np.meshgrid(phi, theta, indexing="ij")
        nodes = np.stack(
            [np.sin(pp) * np.cos(tt), np.sin(pp) * np.sin(tt), np.cos(pp)], axis=-1
        ).reshape(-1, 3)
        weights = (np.sin(pp) * (math.pi / n_phi) * (2.0 * math.pi / n_theta)).reshape(-1)
        return nodes, weights
    raise UnsupportedDimError("quadrature only implemented for d in {2, 3}")


def integrate_density(model: DensityModel, resolution=None) -> float:
    """Numerical integral of the density over the sphere (validation only)."""
    nodes, weights = sphere_quadrature(model.dim, resolution)
    return float(np.exp(model.log_density(nodes)) @ weights)
