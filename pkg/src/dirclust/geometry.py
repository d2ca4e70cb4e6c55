"""Unit-sphere primitives: normalization, geodesics, angle conversions.

Points on S^{d-1} are plain numpy arrays of shape (d,), samples are
arrays of shape (n, d) with unit rows.  The spherical coordinate
convention used throughout is (theta azimuth, phi polar):

    x = (sin(phi) cos(theta), sin(phi) sin(theta), cos(phi))

with theta the first angle.  On the circle the single angle theta maps
to (cos(theta), sin(theta)).
"""

import numpy as np

from .errors import (
    AntipodalError,
    DimMismatchError,
    InvalidDimError,
    NonFiniteError,
    ZeroVectorError,
)

ANTIPODAL_TOL = 1e-9
_ZERO_NORM = 1e-300


def normalize(v: np.ndarray) -> np.ndarray:
    """Project a raw d-vector (d >= 2) onto the unit sphere.

    Already-unit input is returned unchanged (bitwise), which makes the
    operation idempotent.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise InvalidDimError(f"expected a 1-d vector with d >= 2, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("vector has NaN or infinite components")
    norm = float(np.linalg.norm(v))
    if norm < _ZERO_NORM:
        raise ZeroVectorError("vector norm too small to normalize")
    if abs(norm - 1.0) < 1e-14:
        return v.copy()
    return v / norm


def normalize_rows(a: np.ndarray) -> np.ndarray:
    """Row-wise :func:`normalize` for an (n, d) array.

    Raises ZeroVectorError listing the offending row indices, and
    NonFiniteError if any entry is NaN/inf.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[1] < 2:
        raise InvalidDimError(f"expected an (n, d) array with d >= 2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        bad = np.where(~np.isfinite(a).all(axis=1))[0]
        raise NonFiniteError(f"non-finite rows at indices {bad.tolist()}")
    norms = np.linalg.norm(a, axis=1)
    zero = np.where(norms < _ZERO_NORM)[0]
    if zero.size:
        raise ZeroVectorError(f"zero rows at indices {zero.tolist()}")
    return a / norms[:, None]


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimMismatchError(f"dimensions differ: {a.shape[-1]} vs {b.shape[-1]}")


def geodesic_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Great-circle distance in radians, in [0, pi].

    The dot product is clamped to [-1, 1] before arccos to suppress
    rounding noise.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dim(a, b)
    if np.array_equal(a, b):
        return 0.0
    return float(np.arccos(np.clip(a @ b, -1.0, 1.0)))


def pairwise_geodesic(x: np.ndarray, y: np.ndarray | None = None) -> np.ndarray:
    """Matrix of geodesic distances between unit rows of x and y."""
    x = np.asarray(x, dtype=float)
    y = x if y is None else np.asarray(y, dtype=float)
    _check_same_dim(x, y)
    return np.arccos(np.clip(x @ y.T, -1.0, 1.0))


def geodesic_points(a: np.ndarray, b: np.ndarray, step: float) -> np.ndarray:
    """Points along the minor great-circle arc from a to b.

    Returns an (m, d) array with both endpoints included and consecutive
    points at most `step` radians apart.  If the points are closer than
    `step` the result is exactly [a, b] (a degenerate [a, a] arc when
    they coincide).  Antipodal input is rejected: the minimizing great
    circle is not unique there.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dim(a, b)
    if step <= 0:
        raise ValueError("step must be positive")
    dot = float(np.clip(a @ b, -1.0, 1.0))
    if 1.0 + dot < ANTIPODAL_TOL:
        raise AntipodalError("points are antipodal; geodesic is not unique")
    theta = float(np.arccos(dot))
    if theta <= step:
        return np.vstack([a, b])
    n_seg = int(np.ceil(theta / step))
    t = np.arange(1, n_seg) / n_seg
    sin_theta = np.sin(theta)
    pts = np.empty((n_seg + 1, a.shape[0]))
    pts[0] = a
    pts[-1] = b
    pts[1:-1] = (
        np.sin((1.0 - t) * theta)[:, None] * a + np.sin(t * theta)[:, None] * b
    ) / sin_theta
    return pts


def arc_interior_points(a: np.ndarray, b: np.ndarray, step: float, min_interior: int) -> np.ndarray:
    """Interior slerp points only (endpoints excluded), at least `min_interior` of them.

    Used for graph edge weights, where endpoint densities are already
    known.  Degenerate (near-coincident) pairs yield an empty array.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dot = float(np.clip(a @ b, -1.0, 1.0))
    if 1.0 + dot < ANTIPODAL_TOL:
        raise AntipodalError("points are antipodal; geodesic is not unique")
    theta = float(np.arccos(dot))
    if theta < 1e-9:
        return np.empty((0, a.shape[0]))
    n_seg = max(int(np.ceil(theta / step)), min_interior + 1)
    t = np.arange(1, n_seg) / n_seg
    return (
        np.sin((1.0 - t) * theta)[:, None] * a + np.sin(t * theta)[:, None] * b
    ) / np.sin(theta)


def circular_to_cartesian(theta) -> np.ndarray:
    """Angle(s) on the circle to unit vectors: theta -> (cos, sin)."""
    theta = np.asarray(theta, dtype=float)
    out = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return out


def cartesian_to_circular(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`circular_to_cartesian`, angles in [0, 2*pi)."""
    x = np.asarray(x, dtype=float)
    return np.mod(np.arctan2(x[..., 1], x[..., 0]), 2.0 * np.pi)


def spherical_to_cartesian(angles) -> np.ndarray:
    """(d-1) hyperspherical angles to a unit d-vector.

    angles = (theta, phi_1, ..., phi_{d-2}); for d=3 this is the
    (azimuth, polar) convention stated in the module docstring.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if not np.all(np.isfinite(angles)):
        raise NonFiniteError("angles must be finite")
    theta = angles[0]
    vec = np.array([np.cos(theta), np.sin(theta)])
    for phi in angles[1:]:
        vec = np.concatenate([np.sin(phi) * vec, [np.cos(phi)]])
    return vec


def cartesian_to_spherical(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`spherical_to_cartesian` (away from the poles)."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    if d < 2:
        raise InvalidDimError("need d >= 2")
    angles = [np.mod(np.arctan2(x[1], x[0]), 2.0 * np.pi)]
    for k in range(2, d):
        r = np.linalg.norm(x[:k])
        angles.append(np.arctan2(r, x[k]))
    return np.asarray(angles)


def lonlat_degrees_to_cartesian(lon, lat) -> np.ndarray:
    """Longitude/latitude in degrees to a point on S^2 (lat 90 -> north pole)."""
    theta = np.deg2rad(np.asarray(lon, dtype=float))
    phi = np.deg2rad(90.0 - np.asarray(lat, dtype=float))
    return np.stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
        axis=-1,
    )
