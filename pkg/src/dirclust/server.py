"""HTTP/JSON backend for the explorer UI.

Every endpoint is a pure function of (dataset, query); responses are
cached per bandwidth rounded to 1e-6 so repeated queries are
byte-identical.  Malformed queries get 400, semantic mismatches
(dimension, unknown selector) get 422.
"""

from functools import lru_cache

import numpy as np
from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .bandwidth import select_bandwidth
from .density import KernelDensity
from .exports import (
    DEFAULT_SELECTORS_D2,
    DEFAULT_SELECTORS_D3,
    ccluster_row,
    export_scluster,
)
from .hdr import TauGrid, estimate_threshold, hdr_mask, level_for_tau
from .tree import GraphConfig, build_graph, build_merge_tree, cluster_cores


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def _unprocessable(detail: str) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": detail})


def create_app(sample: np.ndarray, *, step: float = 0.02, knn: int | None = None,
               selectors=None, tau_grid: TauGrid | None = None,
               angle_resolution: int = 512, disk_resolution: int = 64) -> FastAPI:
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    n, d = sample.shape
    tau_grid = tau_grid or TauGrid.default()
    if selectors is None:
        selectors = DEFAULT_SELECTORS_D2 if d == 2 else DEFAULT_SELECTORS_D3

    selector_bandwidths = {sel: select_bandwidth(sample, sel).h for sel in selectors}
    app = FastAPI(title="dirclust explorer backend")

    def parse_h(raw: str):
        try:
            h = round(float(raw), 6)
        except (TypeError, ValueError):
            return None
        return h if h > 0 else None

    @lru_cache(maxsize=256)
    def kde_for(h: float) -> KernelDensity:
        return KernelDensity(sample, h)

    @lru_cache(maxsize=256)
    def density_payload(h: float) -> dict:
        if d == 2:
            density, thresholds = ccluster_row(sample, h, angle_resolution, tau_grid)
            angles = np.arange(angle_resolution) * (2.0 * np.pi / angle_resolution)
            return {
                "h": h,
                "inv_h2": 1.0 / h**2,
                "angles": angles.tolist(),
                "density": density.tolist(),
                "taus": list(tau_grid.taus),
                "thresholds": thresholds,
            }
        doc = export_scluster(sample, [h], disk_resolution=disk_resolution,
                              selectors=(), tau_grid=tau_grid)
        frame = doc["frames"][0]
        frame["taus"] = doc["taus"]
        frame["sample_points"] = doc["sample_points"]
        return frame

    @lru_cache(maxsize=64)
    def tree_payload(h: float) -> dict:
        kde = kde_for(h)
        graph = build_graph(kde, sample, GraphConfig(step=step, knn=knn))
        tree = build_merge_tree(graph)
        levels = level_for_tau(kde, sample, tau_grid)
        return tree, tree.to_json(levels=levels)

    @lru_cache(maxsize=64)
    def cores_payload(h: float) -> dict:
        kde = kde_for(h)
        tree, _ = tree_payload(h)
        levels = level_for_tau(kde, sample, tau_grid)
        cores = cluster_cores(tree, levels)
        return {
            "h": h,
            "n_c": cores.n_c,
            "core_level": cores.core_level,
            "tau": cores.tau,
            "labels": cores.labels.tolist(),
        }

    @app.get("/api/meta")
    def meta():
        return {"n": n, "d": d, "selectors": selector_bandwidths}

    @app.get("/api/density")
    def density(h: str = Query(default=None)):
        hv = parse_h(h)
        if hv is None:
            return _bad_request("query parameter h must be a positive number")
        if d not in (2, 3):
            return _unprocessable(f"density grid unavailable for d = {d}")
        return density_payload(hv)

    @app.get("/api/tree")
    def tree_endpoint(h: str = Query(default=None)):
        hv = parse_h(h)
        if hv is None:
            return _bad_request("query parameter h must be a positive number")
        _, payload = tree_payload(hv)
        return payload

    @app.get("/api/hdr")
    def hdr(h: str = Query(default=None), tau: str = Query(default=None)):
        hv = parse_h(h)
        if hv is None:
            return _bad_request("query parameter h must be a positive number")
        try:
            tau_v = float(tau)
        except (TypeError, ValueError):
            return _bad_request("query parameter tau must be a number")
        if not 0 < tau_v < 1:
            return _bad_request("tau must lie strictly inside (0, 1)")
        kde = kde_for(hv)
        spec = estimate_threshold(kde, sample, tau_v)
        return {
            "h": hv,
            "tau": tau_v,
            "threshold": spec.threshold,
            "mask": hdr_mask(spec, sample).tolist(),
        }

    @app.get("/api/cores")
    def cores(h: str = Query(default=None)):
        hv = parse_h(h)
        if hv is None:
            return _bad_request("query parameter h must be a positive number")
        return cores_payload(hv)

    return app


def serve(sample: np.ndarray, host: str = "127.0.0.1", port: int = 8000, **kwargs) -> None:
    import uvicorn

    uvicorn.run(create_app(sample, **kwargs), host=host, port=port, log_level="warning")
