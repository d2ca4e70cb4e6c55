"""Simulation scenarios: vMF mixture catalogs and the replication harness.

Each replication samples n points from every group, pools them, fits
the KDE with the configured bandwidth, runs the filtration -> cores ->
classification pipeline, and scores the result against the generating
labels with the ARI (plus a spherical k-means baseline when enabled).
Replication seeds are spawned deterministically from the master seed,
so results are reproducible regardless of worker scheduling.
"""

import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bandwidth import select_bandwidth
from .classify import Labeling, adjusted_rand_index, classify, spherical_kmeans
from .density import KernelDensity, sample_vmf
from .geometry import circular_to_cartesian, spherical_to_cartesian
from .hdr import TauGrid, level_for_tau
from .tree import GraphConfig, build_graph, build_merge_tree, cluster_cores

KNN_AUTO_THRESHOLD = 1500
KNN_DEFAULT = 30


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    dim: int
    mus: tuple  # unit vectors, one per group
    kappas: tuple
    n_per_group: int
    selector: object = None  # selector id string or literal bandwidth
    replications: int = 50
    seed: int = 0
    kmeans: bool = True
    knn: object = "auto"  # int, None, or "auto"
    step: float = 0.02
    tau_grid: TauGrid = field(default_factory=TauGrid.default)

    @property
    def n_groups(self) -> int:
        return len(self.mus)

    @property
    def n_total(self) -> int:
        return self.n_per_group * self.n_groups

    def resolved_knn(self):
        if self.knn == "auto":
            return KNN_DEFAULT if self.n_total >= KNN_AUTO_THRESHOLD else None
        return self.knn


@dataclass
class TableRow:
    scenario: str
    selector: str
    ari_mean: float
    ari_sd: float
    reps: int
    errors: int
    seconds: float


_OFFSET_NAMES = {
    "dpi6": math.pi / 6,
    "d2pi6": 2 * math.pi / 6,
    "d3pi6": 3 * math.pi / 6,
    "d2pi3": 2 * math.pi / 3,
    "dpi9": math.pi / 9,
    "d2pi9": 2 * math.pi / 9,
    "d5pi18": 5 * math.pi / 18,
}


def scenario_catalog() -> dict:
    """Every simulation scenario from the study, keyed by id.

    Circular two-group: kappa in {3, 5, 10} x mean offsets
    {pi/6, 2pi/6, 3pi/6, 2pi/3} x n in {750, 1000, 1500}; circular
    three-group (kappa 3, successive equal offsets); spherical
    two-group kappa 20 with first-angle offsets, n in {1000, 2000}.
    """
    catalog = {}
    mu1 = math.pi / 2

    for kappa in (3, 5, 10):
        for off_name in ("dpi6", "d2pi6", "d3pi6", "d2pi3"):
            delta = _OFFSET_NAMES[off_name]
            for n in (750, 1000, 1500):
                sid = f"circ-k{kappa}-{off_name}-n{n}"
                catalog[sid] = ScenarioConfig(
                    scenario_id=sid,
                    dim=2,
                    mus=(
                        tuple(circular_to_cartesian(mu1)),
                        tuple(circular_to_cartesian(mu1 + delta)),
                    ),
                    kappas=(float(kappa), float(kappa)),
                    n_per_group=n,
                )

    for off_name in ("dpi6", "d2pi6", "d3pi6", "d2pi3"):
        delta = _OFFSET_NAMES[off_name]
        for n in (750, 1000, 1500):
            sid = f"circ3-k3-{off_name}-n{n}"
            catalog[sid] = ScenarioConfig(
                scenario_id=sid,
                dim=2,
                mus=(
                    tuple(circular_to_cartesian(mu1)),
                    tuple(circular_to_cartesian(mu1 + delta)),
                    tuple(circular_to_cartesian(mu1 + 2 * delta)),
                ),
                kappas=(3.0, 3.0, 3.0),
                n_per_group=n,
            )

    sph_mu1 = (math.pi / 4, math.pi / 2)
    for off_name in ("dpi9", "dpi6", "d2pi9", "d5pi18"):
        delta = _OFFSET_NAMES[off_name]
        for n in (1000, 2000):
            sid = f"sph-k20-{off_name}-n{n}"
            catalog[sid] = ScenarioConfig(
                scenario_id=sid,
                dim=3,
                mus=(
                    tuple(spherical_to_cartesian(sph_mu1)),
                    tuple(spherical_to_cartesian((sph_mu1[0] + delta, sph_mu1[1]))),
                ),
                kappas=(20.0, 20.0),
                n_per_group=n,
            )
    return catalog


def get_scenario(scenario_id: str, **overrides) -> ScenarioConfig:
    catalog = scenario_catalog()
    if scenario_id not in catalog:
        raise KeyError(f"unknown scenario {scenario_id!r}")
    return replace(catalog[scenario_id], **overrides)


def run_replication(config: ScenarioConfig, rep_index: int):
    """One replication; returns (ari_density, ari_kmeans or nan)."""
    ss = np.random.SeedSequence(entropy=config.seed, spawn_key=(rep_index,))
    sample_seed, kmeans_seed = ss.spawn(2)
    rng = np.random.default_rng(sample_seed)

    groups = []
    truth = []
    for g, (mu, kappa) in enumerate(zip(config.mus, config.kappas), start=1):
        groups.append(sample_vmf(np.asarray(mu), kappa, config.n_per_group, rng))
        truth.extend([g] * config.n_per_group)
    sample = np.vstack(groups)
    truth = np.asarray(truth)

    result = select_bandwidth(sample, config.selector)
    kde = KernelDensity(sample, result.h)
    graph = build_graph(kde, sample, GraphConfig(step=config.step, knn=config.resolved_knn()))
    tree = build_merge_tree(graph)
    levels = level_for_tau(kde, sample, config.tau_grid)
    cores = cluster_cores(tree, levels)
    labeling = classify(cores, sample, result.h)
    ari_density = adjusted_rand_index(labeling, truth)

    ari_km = math.nan
    if config.kmeans:
        km = spherical_kmeans(sample, config.n_groups, seed=np.random.default_rng(kmeans_seed))
        ari_km = adjusted_rand_index(km, truth)
    return ari_density, ari_km


def _worker(args):
    config, rep = args
    try:
        return rep, run_replication(config, rep), None
    except Exception as exc:  # recorded, never silently dropped
        return rep, None, f"{type(exc).__name__}: {exc}"


def run_scenario(config: ScenarioConfig, jobs: int | None = None, log=None) -> list:
    """Run all replications and aggregate into TableRows.

    Returns one row for the density-based method and, when enabled, one
    for the k-means baseline (selector id '<k>-means').  Failed
    replications are excluded from the aggregates and counted in the
    ``errors`` column.
    """
    if config.selector is None:
        raise ValueError("scenario config needs a bandwidth selector")
    start = time.perf_counter()
    tasks = [(config, rep) for rep in range(config.replications)]
    if jobs and jobs > 1:
        # spawn: the compiled kernels use OpenMP, which is not fork-safe
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            raw = list(pool.map(_worker, tasks))
    else:
        raw = [_worker(task) for task in tasks]
    raw.sort(key=lambda r: r[0])

    density_aris, kmeans_aris, errors = [], [], []
    for rep, values, err in raw:
        if err is not None:
            errors.append((rep, err))
            continue
        density_aris.append(values[0])
        kmeans_aris.append(values[1])
    if log:
        for rep, err in errors:
            log(f"replication {rep} failed: {err}")
    elapsed = time.perf_counter() - start

    def agg(values):
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return math.nan, math.nan
        return float(values.mean()), float(values.std(ddof=1)) if values.size > 1 else 0.0

    selector_id = config.selector if isinstance(config.selector, str) else f"{config.selector:g}"
    mean_d, sd_d = agg(density_aris)
    rows = [
        TableRow(config.scenario_id, selector_id, mean_d, sd_d,
                 config.replications, len(errors), elapsed)
    ]
    if config.kmeans:
        mean_k, sd_k = agg([a for a in kmeans_aris if not math.isnan(a)])
        rows.append(
            TableRow(config.scenario_id, f"{config.n_groups}-means", mean_k, sd_k,
                     config.replications, len(errors), elapsed)
        )
    return rows


CSV_HEADER = "scenario,selector,ari_mean,ari_sd,reps,errors"


def rows_to_csv(rows, include_timing: bool = False) -> str:
    """Render TableRows as CSV.  Timing is opt-in so identical (config,
    seed) runs produce byte-identical output."""
    header = CSV_HEADER + (",seconds" if include_timing else "")
    lines = [header]
    for row in rows:
        line = (
            f"{row.scenario},{row.selector},{row.ari_mean:.6f},{row.ari_sd:.6f},"
            f"{row.reps},{row.errors}"
        )
        if include_timing:
            line += f",{row.seconds:.2f}"
        lines.append(line)
    return "\n".join(lines) + "\n"
