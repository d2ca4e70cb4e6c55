"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bandwidth import DEFAULT_RANGE, select_bandwidth
from .classify import adjusted_rand_index, classify, spherical_kmeans
from .dataio import FORMATS, load_labels, load_sample, write_labels
from .density import KernelDensity, integrate_density
from .errors import (
    DegenerateSampleError,
    DirclustError,
    NonFiniteError,
    NonFiniteScoreError,
    ParseError,
    ZeroVectorError,
)
from .exports import default_inv_h2_grid, export_ccluster, export_scluster
from .hdr import TauGrid, level_for_tau
from .scenarios import (
    KNN_AUTO_THRESHOLD,
    KNN_DEFAULT,
    ScenarioConfig,
    get_scenario,
    rows_to_csv,
    run_scenario,
    scenario_catalog,
)
from .tree import GraphConfig, build_graph, build_merge_tree, cluster_cores

USAGE_EXIT, DATA_EXIT, NUMERIC_EXIT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _add_data_args(p):
    p.add_argument("data", help="CSV file with observations")
    p.add_argument("--format", choices=FORMATS, default="raw-rows",
                   help="input interpretation (default raw-rows)")
    p.add_argument("--log-cols", default=None,
                   help="comma-separated column indices to natural-log before normalizing")


def _add_model_args(p):
    p.add_argument("--bandwidth", default="lcv",
                   help="selector id (rot-circ|rot-hyper|lcv|lscv) or a literal h")
    p.add_argument("--tau-grid", default="0.01:0.99:0.01", help="lo:hi:step grid of tau values")
    p.add_argument("--step", type=float, default=0.02, help="geodesic evaluation step (radians)")
    p.add_argument("--knn", default="auto",
                   help=f"mutual-kNN pruning: an integer, 'none', or 'auto' "
                        f"(= {KNN_DEFAULT} when n >= {KNN_AUTO_THRESHOLD})")


def _load(args) -> np.ndarray:
    log_cols = None
    if args.log_cols:
        log_cols = [int(c) for c in args.log_cols.split(",")]
    return load_sample(args.data, args.format, log_cols=log_cols)


def _resolve_knn(raw: str, n: int):
    if raw == "auto":
        return KNN_DEFAULT if n >= KNN_AUTO_THRESHOLD else None
    if raw in ("none", "off"):
        return None
    return int(raw)


def _fit_pipeline(args, sample):
    result = select_bandwidth(sample, args.bandwidth)
    kde = KernelDensity(sample, result.h)
    return result, kde


def _tree_pipeline(args, sample):
    result, kde = _fit_pipeline(args, sample)
    config = GraphConfig(step=args.step, knn=_resolve_knn(args.knn, sample.shape[0]))
    graph = build_graph(kde, sample, config)
    tree = build_merge_tree(graph)
    return result, kde, tree


def _emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_fit(args) -> int:
    sample = _load(args)
    result, kde = _fit_pipeline(args, sample)
    payload = {
        "n": int(sample.shape[0]),
        "d": int(sample.shape[1]),
        "selector": result.selector,
        "h": result.h,
        "inv_h2": 1.0 / result.h**2,
        "score": None if np.isnan(result.score) else result.score,
        "converged": result.converged,
        "note": result.note,
    }
    if sample.shape[1] in (2, 3):
        payload["quadrature_integral"] = integrate_density(kde)
    _emit(args, _dump(payload))
    return 0


def cmd_tree(args) -> int:
    sample = _load(args)
    result, kde, tree = _tree_pipeline(args, sample)
    levels = level_for_tau(kde, sample, TauGrid.from_spec(args.tau_grid))
    payload = tree.to_json(levels=levels)
    payload["h"] = result.h
    payload["antipodal_pairs"] = tree.graph.antipodal_pairs
    _emit(args, _dump(payload))
    return 0


def cmd_cores(args) -> int:
    sample = _load(args)
    result, kde, tree = _tree_pipeline(args, sample)
    levels = level_for_tau(kde, sample, TauGrid.from_spec(args.tau_grid))
    cores = cluster_cores(tree, levels)
    payload = {
        "h": result.h,
        "n_c": cores.n_c,
        "core_level": cores.core_level,
        "tau": cores.tau,
        "labels": cores.labels.tolist(),
    }
    _emit(args, _dump(payload))
    return 0


def cmd_classify(args) -> int:
    sample = _load(args)
    result, kde, tree = _tree_pipeline(args, sample)
    levels = level_for_tau(kde, sample, TauGrid.from_spec(args.tau_grid))
    cores = cluster_cores(tree, levels)
    labeling = classify(cores, sample, result.h)
    if args.output:
        write_labels(args.output, labeling.labels)
    else:
        sys.stdout.write("".join(f"{v}\n" for v in labeling.labels))
    if labeling.underflow_fallbacks:
        sys.stderr.write(f"{labeling.underflow_fallbacks} points assigned by "
                         f"nearest core (density underflow)\n")
    return 0


def cmd_ari(args) -> int:
    a = load_labels(args.labels_a)
    b = load_labels(args.labels_b)
    sys.stdout.write(f"{adjusted_rand_index(a, b)}\n")
    return 0


def cmd_kmeans(args) -> int:
    sample = _load(args)
    labeling = spherical_kmeans(sample, args.k, seed=args.seed)
    if args.output:
        write_labels(args.output, labeling.labels)
    else:
        sys.stdout.write("".join(f"{v}\n" for v in labeling.labels))
    return 0


def _scenario_from_config_file(path) -> ScenarioConfig:
    from .geometry import spherical_to_cartesian

    with open(path) as fh:
        raw = json.load(fh)
    if "mu_angles" in raw:
        mus = tuple(tuple(spherical_to_cartesian(a)) for a in raw.pop("mu_angles"))
    else:
        mus = tuple(tuple(mu) for mu in raw.pop("mus"))
    raw.setdefault("scenario_id", "custom")
    raw.setdefault("dim", len(mus[0]))
    return ScenarioConfig(mus=mus, kappas=tuple(raw.pop("kappas")), **raw)


def cmd_simulate(args) -> int:
    if (args.scenario is None) == (args.config is None):
        raise ValueError("provide exactly one of --scenario or --config")
    if args.scenario:
        config = get_scenario(args.scenario)
    else:
        config = _scenario_from_config_file(args.config)
    overrides = {}
    if args.selector is not None:
        overrides["selector"] = args.selector
    if args.reps is not None:
        overrides["replications"] = args.reps
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.no_kmeans:
        overrides["kmeans"] = False
    if args.knn != "auto":
        overrides["knn"] = _resolve_knn(args.knn, config.n_total)
    from dataclasses import replace

    config = replace(config, **overrides)
    if config.selector is None:
        raise ValueError("no bandwidth selector: pass --selector or set it in the config")
    rows = run_scenario(config, jobs=args.jobs, log=lambda m: sys.stderr.write(m + "\n"))
    _emit(args, rows_to_csv(rows, include_timing=args.timing))
    return 0


def _parse_inv_h2(raw: str):
    if raw is None:
        return None
    lo, hi, count = raw.split(":")
    return default_inv_h2_grid(int(count), float(lo), float(hi))


def cmd_export_ccluster(args) -> int:
    sample = _load(args)
    doc = export_ccluster(
        sample,
        inv_h2_grid=_parse_inv_h2(args.inv_h2),
        angle_resolution=args.resolution,
        tau_grid=TauGrid.from_spec(args.tau_grid),
    )
    _emit(args, _dump(doc))
    return 0


def cmd_export_scluster(args) -> int:
    sample = _load(args)
    h_list = [float(h) for h in args.h_list.split(",")]
    doc = export_scluster(
        sample,
        h_list,
        disk_resolution=args.resolution,
        tau_grid=TauGrid.from_spec(args.tau_grid),
    )
    _emit(args, _dump(doc))
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    sample = _load(args)
    host, _, port = args.bind.partition(":")
    serve(
        sample,
        host=host or "127.0.0.1",
        port=int(port or 8000),
        step=args.step,
        knn=_resolve_knn(args.knn, sample.shape[0]),
        tau_grid=TauGrid.from_spec(args.tau_grid),
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="dirclust",
                     description="Density-based clustering on the unit hypersphere")
    parser.add_argument("--version", action="version", version=f"dirclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a KDE and print a summary")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tree", help="cluster tree JSON")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("cores", help="cluster cores at the best level")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_cores)

    p = sub.add_parser("classify", help="full labeling (cores + classified outskirts)")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ari", help="adjusted Rand index of two label files")
    p.add_argument("labels_a")
    p.add_argument("labels_b")
    p.set_defaults(func=cmd_ari)

    p = sub.add_parser("kmeans", help="spherical k-means baseline")
    _add_data_args(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kmeans)

    p = sub.add_parser("simulate", help="run a simulation scenario")
    p.add_argument("--scenario", default=None,
                   help="catalog id (see the list-scenarios subcommand)")
    p.add_argument("--config", default=None, help="JSON scenario config file")
    p.add_argument("--selector", default=None,
                   help="bandwidth selector id or literal h (default: from config)")
    p.add_argument("--reps", type=int, default=None, help="replications (default 50)")
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--knn", default="auto")
    p.add_argument("--no-kmeans", action="store_true")
    p.add_argument("--timing", action="store_true",
                   help="append wall-clock seconds (breaks byte-for-byte determinism)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("list-scenarios", help="print the scenario catalog ids")
    p.set_defaults(func=lambda args: (sys.stdout.write(
        "".join(f"{k}\n" for k in sorted(scenario_catalog()))), 0)[1])

    p = sub.add_parser("export-ccluster", help="circular bandwidth-exploration JSON")
    _add_data_args(p)
    p.add_argument("--inv-h2", default=None, help="lo:hi:count log grid of 1/h^2")
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--tau-grid", default="0.01:0.99:0.01")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_ccluster)

    p = sub.add_parser("export-scluster", help="spherical bandwidth-animation JSON")
    _add_data_args(p)
    p.add_argument("--h-list", required=True, help="comma-separated bandwidths")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--tau-grid", default="0.01:0.99:0.01")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_scluster)

    p = sub.add_parser("serve", help="HTTP backend for the explorer UI")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, (ParseError, ZeroVectorError, NonFiniteError)):
            sys.stderr.write(f"data error: {exc}\n")
            return DATA_EXIT
        if isinstance(exc, (NonFiniteScoreError, DegenerateSampleError)):
            sys.stderr.write(f"numeric failure: {exc}\n")
            return NUMERIC_EXIT
        if isinstance(exc, DirclustError):
            sys.stderr.write(f"data error: {exc}\n")
            return DATA_EXIT
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT
    except FileNotFoundError as exc:
        sys.stderr.write(f"data error: {exc}\n")
        return DATA_EXIT
    except FloatingPointError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
