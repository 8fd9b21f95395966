# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# -----------------------
# Standard Python imports
# ----------------------

import sys
import json
import logging

from argparse import Namespace, ArgumentParser
from contextlib import contextmanager
from typing import List, Optional, Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

from lica.cli import async_execute
from lica.typing import OptStr

# --------------
# local imports
# -------------

from . import __version__
from .constants import CalibrationMode, Generator, Method, OutputFormat, SYMMETRY_TOLERANCE
from .core import (
    ClusterValError,
    BadConfigError,
    Clustering,
    DissimilarityMatrix,
    PointDataset,
    MalformedInputError,
    build_dissimilarity,
)
from .config import RunSettings, load_settings
from .profile import compute_profile
from .random_clusterings import SeedPlan, generate_collection, agenerate_collection, stupid_kcentroids, stupid_nn
from .calibration import AggregationSpec, MissingIndexError, aggregate, aggregate_random, calibrate_all
from .clusterers import adjusted_rand, run_method
from .datasets import mixed_shapes_dataset
from .report import ReportRow, build_report
from .utils import parser as prs
from .utils.utils import read_dissimilarity_csv, read_points_csv, read_labels, write_labels, write_points, stem

# ----------------
# Module constants
# ----------------

DESCRIPTION = "Cluster validation profiles calibrated against random clusterings"

# substream code for k-means starts, next to the random clustering generator codes
KMEANS_STREAM = 3

LABELS_METHOD = "labels"

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# -------------------
# Auxiliary functions
# -------------------


def load_data(args: Namespace) -> Tuple[DissimilarityMatrix, Optional[PointDataset]]:
    if args.dissim is not None:
        tolerance = SYMMETRY_TOLERANCE if args.tolerance is None else args.tolerance
        return read_dissimilarity_csv(args.dissim, tolerance), None
    points = read_points_csv(args.points, args.metric)
    return build_dissimilarity(points), points


def load_labels(path: str, n: int) -> Clustering:
    C = read_labels(path)
    if C.n != n:
        raise MalformedInputError(f"{path}: {C.n} labels but the data has {n} objects")
    return C


def run_settings(args: Namespace) -> RunSettings:
    settings = load_settings(getattr(args, "config", None))
    settings = settings.override(
        indexes=getattr(args, "indexes", None),
        kmax=getattr(args, "kmax", None),
        seed=getattr(args, "seed", None),
        calibration=getattr(args, "calibration", None),
        B=getattr(args, "B", None),
        concurrent=getattr(args, "concurrent", None),
        normalise_weights=getattr(args, "normalise_weights", None),
        k_range=getattr(args, "k_range", None),
    )
    weights = getattr(args, "weights", None)
    if weights is not None:
        settings = settings.override(weights=tuple(weights.items()))
    return settings


def master_seed(settings: RunSettings) -> int:
    if settings.seed is not None:
        return settings.seed
    seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    log.warning("No --seed given, using entropy derived seed %d", seed)
    return seed


def aggregation_spec(settings: RunSettings) -> AggregationSpec:
    spec = AggregationSpec.from_mapping(settings.weight_map())
    unselected = [str(i) for i in spec.indexes if i not in settings.indexes]
    if unselected:
        raise BadConfigError(f"weighted indexes not selected: {', '.join(unselected)}")
    return spec.normalised() if settings.normalise_weights else spec


def sweep(
    D: DissimilarityMatrix,
    points: Optional[PointDataset],
    methods: Sequence[Method],
    k_range: Tuple[int, int],
    seed: int,
    restarts: int,
) -> List[Tuple[str, str, Clustering]]:
    candidates = list()
    for method in methods:
        for K in range(k_range[0], k_range[1] + 1):
            rng = np.random.default_rng(np.random.SeedSequence([seed, KMEANS_STREAM, K]))
            result = run_method(method, K, D, points, rng, restarts)
            candidates.append((result.tag, str(method), result.clustering))
    return candidates


@contextmanager
def output_stream(path: OptStr):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f
        log.info("Output written to %s", path)


def emit(report, fmt: OutputFormat, path: OptStr) -> None:
    if fmt == OutputFormat.JSON:
        text = report.to_json()
    elif fmt == OutputFormat.CSV:
        text = report.to_csv()
    else:
        text = report.to_table()
    with output_stream(path) as stream:
        stream.write(text)


def ari_or_none(C: Clustering, reference: Optional[Clustering]) -> Optional[float]:
    return None if reference is None else adjusted_rand(C, reference)


# ===========
# Generic API
# ===========


async def cli_validate(args: Namespace) -> None:
    D, _ = load_data(args)
    settings = run_settings(args)
    config = settings.validation_config()
    reference = load_labels(args.truth, D.n) if args.truth else None
    rows = list()
    for path in args.labels:
        C = load_labels(path, D.n)
        profile = compute_profile(D, C, config, settings.indexes)
        rows.append(ReportRow.from_profiles(stem(path), LABELS_METHOD, profile, ari=ari_or_none(C, reference)))
    metadata = {
        "command": "validate",
        "n": D.n,
        "config": config.as_dict(),
        "indexes": [str(i) for i in settings.indexes],
    }
    emit(build_report(rows, metadata), args.format, args.output)


async def cli_compare(args: Namespace) -> None:
    D, points = load_data(args)
    settings = run_settings(args)
    config = settings.validation_config()
    spec = aggregation_spec(settings)
    seed = master_seed(settings)
    reference = load_labels(args.truth, D.n) if args.truth else None
    candidates = [(stem(path), LABELS_METHOD, load_labels(path, D.n)) for path in (args.labels or [])]
    if args.methods:
        k_range = settings.k_range or (2, settings.kmax)
        candidates.extend(sweep(D, points, args.methods, k_range, seed, args.restarts))
    if not candidates:
        raise BadConfigError("nothing to compare, give --labels and/or --methods")
    profiles = [compute_profile(D, C, config, settings.indexes) for _, _, C in candidates]
    mode = settings.calibration
    collection = None
    if mode != CalibrationMode.NONE:
        if settings.concurrent > 1:
            collection = await agenerate_collection(D, config, seed, settings.indexes, settings.concurrent)
        else:
            collection = generate_collection(D, config, seed, settings.indexes)
    calibrated = calibrate_all(profiles, collection, mode)
    rows = list()
    for (name, method, C), profile, cal in zip(candidates, profiles, calibrated):
        try:
            score = aggregate(cal, spec)
        except MissingIndexError as e:
            log.warning("[%s] no aggregated score: %s", name, e)
            score = None
        rows.append(ReportRow.from_profiles(name, method, profile, cal, score, ari_or_none(C, reference)))
    metadata = {
        "command": "compare",
        "n": D.n,
        "seed": seed,
        "calibration": str(mode),
        "config": config.as_dict(),
        "indexes": [str(i) for i in settings.indexes],
        "weights": spec.as_dict(),
    }
    if collection is not None:
        metadata["exclusions"] = collection.exclusion_counts()
        metadata["random_aggregates"] = [r.as_dict() for r in aggregate_random(collection, spec, mode, profiles)]
        if args.dump_collection:
            with open(args.dump_collection, "w") as f:
                json.dump(collection.to_dict(), f, indent=2)
            log.info("Random clusterings written to %s", args.dump_collection)
    emit(build_report(rows, metadata), args.format, args.output)


async def cli_random(args: Namespace) -> None:
    D, _ = load_data(args)
    func = stupid_kcentroids if args.generator == Generator.STUPIDCENT else stupid_nn
    if args.centers is not None:
        C = func(D, args.K, centers=args.centers)
    else:
        settings = run_settings(args)
        rng = SeedPlan(master_seed(settings)).substream(args.generator, args.K, 0)
        C = func(D, args.K, rng=rng)
    log.info("[%s] random clustering with K = %d, sizes %s", args.generator, C.K, list(C.sizes))
    with output_stream(args.output) as stream:
        write_labels(C, stream)


async def cli_simulate(args: Namespace) -> None:
    settings = run_settings(args)
    rng = np.random.default_rng(master_seed(settings))
    points, truth = mixed_shapes_dataset(rng, args.n_uniform, args.n_gauss)
    with output_stream(args.output) as stream:
        write_points(points.coords, stream, header=("x", "y"))
    if args.truth_output:
        with output_stream(args.truth_output) as stream:
            write_labels(truth, stream)
    log.info("Simulated %d points in %d groups", points.n, truth.K)


# ================================
# COMMAND LINE INTERFACE FUNCTIONS
# ================================


def add_args(parser: ArgumentParser) -> ArgumentParser:
    subparser = parser.add_subparsers(dest="command", required=True)
    parser_validate = subparser.add_parser(
        "validate",
        parents=[prs.data_input(), prs.labels(), prs.truth(), prs.indexes(), prs.settings(), prs.output()],
        help="Normalised index values of given clusterings",
    )
    parser_validate.set_defaults(func=cli_validate)
    parser_compare = subparser.add_parser(
        "compare",
        parents=[
            prs.data_input(),
            prs.labels(required=False),
            prs.truth(),
            prs.indexes(),
            prs.settings(),
            prs.calibration(),
            prs.sweep(),
            prs.output(),
        ],
        help="Calibrate and aggregate index values against random clusterings",
    )
    parser_compare.set_defaults(func=cli_compare)
    parser_random = subparser.add_parser(
        "random",
        parents=[prs.data_input(), prs.generator(), prs.settings(), prs.output(formats=False)],
        help="Emit the labels of one random clustering",
    )
    parser_random.set_defaults(func=cli_random)
    parser_simulate = subparser.add_parser(
        "simulate",
        parents=[prs.settings(), prs.output(formats=False)],
        help="Generate the mixed shapes artificial dataset",
    )
    parser_simulate.add_argument("--truth-output", type=str, default=None, metavar="<FILE>", help="True labels file")
    parser_simulate.add_argument("--n-uniform", type=prs.vpositive, default=70, metavar="<N>", help="Uniform points")
    parser_simulate.add_argument("--n-gauss", type=prs.vpositive, default=15, metavar="<N>", help="Points per Gaussian")
    parser_simulate.set_defaults(func=cli_simulate)
    return parser


async def cli_main(args: Namespace) -> None:
    """The main entry point specified by pyproject.toml"""
    try:
        await args.func(args)
    except (ClusterValError, OSError) as e:
        log.error("%s", e)
        print(f"clusterval {args.command}: error: {e}", file=sys.stderr)
        sys.exit(2)
    log.info("done!")


def main() -> None:
    async_execute(
        main_func=cli_main,
        add_args_func=add_args,
        name="clusterval",
        version=__version__,
        description=DESCRIPTION,
    )


if __name__ == "__main__":
    main()
