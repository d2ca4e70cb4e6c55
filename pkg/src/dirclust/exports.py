"""JSON exports backing the exploratory bandwidth tools.

The circular export (cCluster) is a density matrix over a grid of
concentrations 1/h^2 and angles, with per-row HDR thresholds.  The
spherical export (sCluster) is a sequence of animation frames, one per
bandwidth, each holding two equal-area disk rasters (Lambert azimuthal
projection of the two hemispheres).
"""

import math

import numpy as np

from .bandwidth import select_bandwidth
from .density import KernelDensity
from .errors import DimMismatchError
from .geometry import cartesian_to_circular
from .hdr import TauGrid, level_for_tau

DEFAULT_SELECTORS_D2 = ("rot-circ", "lcv", "lscv")
DEFAULT_SELECTORS_D3 = ("rot-hyper", "lcv", "lscv")


def default_inv_h2_grid(count: int = 60, lo: float = 0.5, hi: float = 400.0) -> np.ndarray:
    """Log-spaced concentration grid; wide enough that the multi-cluster
    regime past 1/h^2 = 100 stays visible."""
    return np.geomspace(lo, hi, count)


def selector_marks(sample: np.ndarray, selectors) -> dict:
    marks = {}
    for sel in selectors:
        result = select_bandwidth(sample, sel)
        marks[sel] = 1.0 / result.h**2
    return marks


def ccluster_row(sample: np.ndarray, h: float, angle_resolution: int, tau_grid: TauGrid):
    """One density row of the circular export: (densities, thresholds)."""
    angles = np.arange(angle_resolution) * (2.0 * math.pi / angle_resolution)
    ring = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    kde = KernelDensity(sample, h)
    density = np.exp(kde.log_density(ring))
    thresholds = [thr for _, thr in level_for_tau(kde, sample, tau_grid)]
    return density, thresholds


def export_ccluster(sample: np.ndarray, inv_h2_grid=None, angle_resolution: int = 512,
                    selectors=DEFAULT_SELECTORS_D2, tau_grid: TauGrid | None = None) -> dict:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[1] != 2:
        raise DimMismatchError("cCluster export requires circular data (d == 2)")
    inv_h2_grid = np.asarray(
        default_inv_h2_grid() if inv_h2_grid is None else inv_h2_grid, dtype=float
    )
    tau_grid = tau_grid or TauGrid.default()
    angles = np.arange(angle_resolution) * (2.0 * math.pi / angle_resolution)

    density_rows, threshold_rows = [], []
    for inv_h2 in inv_h2_grid:
        density, thresholds = ccluster_row(sample, 1.0 / math.sqrt(inv_h2),
                                           angle_resolution, tau_grid)
        density_rows.append(density.tolist())
        threshold_rows.append(thresholds)

    return {
        "kind": "ccluster",
        "n": int(sample.shape[0]),
        "angles": angles.tolist(),
        "inv_h2": inv_h2_grid.tolist(),
        "density": density_rows,
        "taus": list(tau_grid.taus),
        "thresholds": threshold_rows,
        "sample_angles": cartesian_to_circular(sample).tolist(),
        "selector_marks": selector_marks(sample, selectors),
    }


def _disk_grid(resolution: int):
    """Lambert azimuthal equal-area disk grid of one hemisphere.

    Returns unit points of shape (resolution, resolution, 3) for the
    northern hemisphere and a validity mask (cells inside the disk of
    radius sqrt(2)).  The southern hemisphere mirrors z.
    """
    r_max = math.sqrt(2.0)
    coords = (np.arange(resolution) + 0.5) / resolution * (2.0 * r_max) - r_max
    xx, yy = np.meshgrid(coords, coords, indexing="xy")
    r2 = xx**2 + yy**2
    inside = r2 <= 2.0
    z = 1.0 - r2 / 2.0
    scale = np.sqrt(np.clip(1.0 - r2 / 4.0, 0.0, None))
    pts = np.stack([xx * scale, yy * scale, z], axis=-1)
    return pts, inside


def project_hemisphere(points: np.ndarray):
    """Lambert equal-area projection of unit points onto their hemisphere disk.

    Returns (hemisphere flags with True = north, 2-d disk coordinates).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    north = points[:, 2] >= 0.0
    z = np.abs(points[:, 2])
    denom = np.sqrt(np.clip((1.0 + z) / 2.0, 1e-300, None))
    disk = points[:, :2] / denom[:, None]
    return north, disk


def export_scluster(sample: np.ndarray, h_list, disk_resolution: int = 64,
                    selectors=DEFAULT_SELECTORS_D3, tau_grid: TauGrid | None = None) -> dict:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[1] != 3:
        raise DimMismatchError("sCluster export requires spherical data (d == 3)")
    tau_grid = tau_grid or TauGrid.default()
    h_list = sorted(float(h) for h in h_list)

    grid_pts, inside = _disk_grid(disk_resolution)
    north_pts = grid_pts.reshape(-1, 3)
    south_pts = north_pts * np.array([1.0, 1.0, -1.0])
    north_flags, disk = project_hemisphere(sample)

    marks = selector_marks(sample, selectors)
    frames = []
    for h in h_list:
        kde = KernelDensity(sample, h)
        north = np.exp(kde.log_density(north_pts)).reshape(disk_resolution, disk_resolution)
        south = np.exp(kde.log_density(south_pts)).reshape(disk_resolution, disk_resolution)
        raster_n = np.where(inside, north, np.nan)
        raster_s = np.where(inside, south, np.nan)
        thresholds = [thr for _, thr in level_for_tau(kde, sample, tau_grid)]
        tagged = [sel for sel, inv in marks.items() if abs(inv - 1.0 / h**2) < 1e-9]
        frames.append(
            {
                "h": h,
                "inv_h2": 1.0 / h**2,
                "north": _nan_to_none(raster_n),
                "south": _nan_to_none(raster_s),
                "thresholds": thresholds,
                "selectors": tagged,
            }
        )
    return {
        "kind": "scluster",
        "n": int(sample.shape[0]),
        "disk_resolution": int(disk_resolution),
        "taus": list(tau_grid.taus),
        "frames": frames,
        "sample_points": {
            "north": disk[north_flags].tolist(),
            "south": disk[~north_flags].tolist(),
        },
        "selector_marks": marks,
    }


def _nan_to_none(raster: np.ndarray) -> list:
    out = []
    for row in raster:
        out.append([None if math.isnan(v) else float(v) for v in row])
    return out
