# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# --------------------
# System wide imports
# -------------------

from argparse import ArgumentParser, ArgumentTypeError

# ---------------------
# Thrid-party libraries
# ---------------------

from lica.validators import vfloat

# ------------------------
# Own modules and packages
# ------------------------

from ..constants import IndexId, Metric, Generator, CalibrationMode, Method, OutputFormat
from ..config import parse_weights, parse_k_range


# ----------
# Validators
# ----------


def _argtype(func, text: str):
    try:
        return func(text)
    except ValueError as e:
        raise ArgumentTypeError(str(e)) from None


def vindexes(text: str):
    return _argtype(IndexId.parse_list, text)


def vweights(text: str):
    return _argtype(parse_weights, text)


def vkrange(text: str):
    return _argtype(parse_k_range, text)


def vmethods(text: str):
    return _argtype(Method.parse_list, text)


def vcalibration(text: str):
    return _argtype(CalibrationMode.parse, text)


def vgenerator(text: str):
    return _argtype(Generator.parse, text)


def vmetric(text: str):
    return _argtype(Metric.parse, text)


def vformat(text: str):
    return _argtype(OutputFormat.parse, text)


def vcenters(text: str):
    """1-based object numbers, returned 0-based"""
    try:
        centers = tuple(int(item) - 1 for item in text.split(",") if item.strip())
    except ValueError:
        raise ArgumentTypeError(f"centers '{text}' must be comma separated object numbers") from None
    if not centers or min(centers) < 0:
        raise ArgumentTypeError(f"centers '{text}' must be object numbers starting at 1")
    return centers


def vpositive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ArgumentTypeError(f"'{text}' is not an integer") from None
    if value < 1:
        raise ArgumentTypeError(f"'{text}' must be a positive integer")
    return value


def vseed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ArgumentTypeError(f"seed '{text}' is not an integer") from None
    if not 0 <= value < 2**64:
        raise ArgumentTypeError(f"seed '{text}' must be a 64 bit unsigned integer")
    return value


# -----------------
# Auxiliary parsers
# -----------------


def data_input() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("-d", "--dissim", type=str, default=None, metavar="<FILE>", help="Dissimilarity matrix CSV")
    group.add_argument("-p", "--points", type=str, default=None, metavar="<FILE>", help="Point coordinates CSV")
    parser.add_argument(
        "-m",
        "--metric",
        type=vmetric,
        default=Metric.EUCLIDEAN,
        metavar="<METRIC>",
        help=f"Dissimilarity for --points, one of {', '.join(Metric.values())} (defaults to %(default)s)",
    )
    parser.add_argument(
        "--tolerance",
        type=vfloat,
        default=None,
        metavar="<X>",
        help="Asymmetry and diagonal tolerance for --dissim",
    )
    return parser


def labels(required: bool = True) -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "-l",
        "--labels",
        type=str,
        action="append",
        required=required,
        default=None,
        metavar="<FILE>",
        help="Label file, one integer per object (repeatable)",
    )
    return parser


def truth() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "-t", "--truth", type=str, default=None, metavar="<FILE>", help="Reference labels for the ARI column"
    )
    return parser


def indexes() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "-x",
        "--indexes",
        type=vindexes,
        default=None,
        metavar="<ID,ID,...>",
        help=f"Index selection among {', '.join(IndexId.values())} (defaults to all)",
    )
    return parser


def settings() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument("--config", type=str, default=None, metavar="<FILE>", help="YAML run configuration file")
    parser.add_argument("-k", "--kmax", type=vpositive, default=None, metavar="<N>", help="Largest K (defaults to 10)")
    parser.add_argument("-s", "--seed", type=vseed, default=None, metavar="<N>", help="Master random seed")
    return parser


def calibration() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "-w",
        "--weights",
        type=vweights,
        default=None,
        metavar="<ID=W,...>",
        help="Aggregation weights (defaults to 1 for every selected index)",
    )
    parser.add_argument(
        "--normalise-weights",
        action="store_true",
        default=None,
        help="Rescale the aggregation weights to sum 1",
    )
    parser.add_argument(
        "-c",
        "--calibration",
        type=vcalibration,
        default=None,
        metavar="<MODE>",
        help=f"Calibration mode, one of {', '.join(CalibrationMode.values())} (defaults to per-k)",
    )
    parser.add_argument(
        "-B", "--B", dest="B", type=vpositive, default=None, metavar="<N>", help="Random clusterings per generator and K"
    )
    parser.add_argument(
        "--concurrent",
        type=vpositive,
        default=None,
        metavar="<N>",
        help="Worker threads evaluating the random clusterings",
    )
    parser.add_argument(
        "--dump-collection", type=str, default=None, metavar="<FILE>", help="JSON dump of the random clusterings"
    )
    return parser


def sweep() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--methods",
        type=vmethods,
        default=None,
        metavar="<M,M,...>",
        help=f"Clustering methods among {', '.join(Method.values())}",
    )
    parser.add_argument("--k-range", type=vkrange, default=None, metavar="<A..B>", help="K values of the sweep")
    parser.add_argument(
        "--restarts", type=vpositive, default=10, metavar="<N>", help="K-means restarts (defaults to %(default)s)"
    )
    return parser


def output(formats: bool = True) -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    if formats:
        parser.add_argument(
            "-f",
            "--format",
            type=vformat,
            default=OutputFormat.TABLE,
            metavar="<FMT>",
            help=f"Report format, one of {', '.join(OutputFormat.values())} (defaults to %(default)s)",
        )
    parser.add_argument(
        "-o", "--output", type=str, default=None, metavar="<FILE>", help="Output file (defaults to stdout)"
    )
    return parser


def generator() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument("-K", dest="K", type=vpositive, required=True, metavar="<K>", help="Number of clusters")
    parser.add_argument(
        "-g",
        "--generator",
        type=vgenerator,
        default=Generator.STUPIDCENT,
        metavar="<GEN>",
        help=f"Random clustering generator, one of {', '.join(Generator.values())} (defaults to %(default)s)",
    )
    parser.add_argument(
        "--centers",
        type=vcenters,
        default=None,
        metavar="<I,J,...>",
        help="Explicit 1-based center objects instead of a random draw",
    )
    return parser
