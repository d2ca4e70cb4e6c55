"""Pure-numpy implementations of the hot kernels.

These are the reference implementations; the Cython module in
``_speedups.pyx`` mirrors them exactly.  Both compute log-space
quantities so concentrations up to 1e6 stay finite.
"""

import numpy as np

# cap on rows*cols of any temporary (m, n) exponent matrix (~256 MB of float64)
_CHUNK_CELLS = 32_000_000


def log_mean_exp_dots(queries: np.ndarray, points: np.ndarray, kappa: float) -> np.ndarray:
    """log( (1/n) * sum_i exp(kappa * q . X_i) ) for each query row q."""
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    m = queries.shape[0]
    out = np.empty(m)
    rows = max(1, _CHUNK_CELLS // max(n, 1))
    for start in range(0, m, rows):
        block = queries[start : start + rows]
        g = kappa * (block @ points.T)
        peak = g.max(axis=1)
        out[start : start + len(block)] = peak + np.log(
            np.exp(g - peak[:, None]).sum(axis=1)
        )
    return out - np.log(n)


def arc_min_log_mean_exp(
    arc_ends: np.ndarray,
    points: np.ndarray,
    edges_i: np.ndarray,
    edges_j: np.ndarray,
    kappa: float,
    step: float,
    min_interior: int,
) -> np.ndarray:
    """Minimum of log_mean_exp_dots over the interior of each geodesic arc.

    Arc endpoints are rows of ``arc_ends`` indexed by the edge arrays;
    kernel centers are ``points`` (usually the same array).  Edges whose
    arc is degenerate (near-coincident endpoints) get +inf, so callers
    can min() against the endpoint values.  Antipodal pairs must be
    filtered out beforehand.
    """
    edges_i = np.asarray(edges_i, dtype=np.intp)
    edges_j = np.asarray(edges_j, dtype=np.intp)
    n_edges = edges_i.shape[0]
    out = np.full(n_edges, np.inf)
    if n_edges == 0:
        return out

    a = arc_ends[edges_i]
    b = arc_ends[edges_j]
    dots = np.clip(np.einsum("ij,ij->i", a, b), -1.0, 1.0)
    theta = np.arccos(dots)
    live = theta >= 1e-9
    if not live.any():
        return out
    n_seg = np.maximum(np.ceil(theta / step).astype(np.intp), min_interior + 1)
    n_seg[~live] = 1  # no interior points

    counts = n_seg - 1
    offsets = np.concatenate([[0], np.cumsum(counts)])
    total = int(offsets[-1])
    d = arc_ends.shape[1]
    interior = np.empty((total, d))
    for e in np.where(live)[0]:
        t = np.arange(1, n_seg[e]) / n_seg[e]
        th = theta[e]
        interior[offsets[e] : offsets[e + 1]] = (
            np.sin((1.0 - t) * th)[:, None] * a[e] + np.sin(t * th)[:, None] * b[e]
        ) / np.sin(th)

    logf = log_mean_exp_dots(interior, points, kappa)
    has = counts > 0
    mins = np.minimum.reduceat(logf, offsets[:-1][has])
    out[has] = mins
    return out
