# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# ------------------------
# Standard Python imports
# -----------------------

from typing import Tuple

# -------------------
# Third party imports
# -------------------

from lica import StrEnum

# -------------------------
# Constant and Enumerations
# -------------------------

P_SEP = 0.1  # portion of objects closest to another cluster
P_DENS = 0.1  # dissimilarity quantile used as kernel bandwidth
K_CV = 4  # neighbour order for the within-cluster CV
B = 100  # random clusterings per generator and per K
SYMMETRY_TOLERANCE = 1e-9
SCHEMA_VERSION = 1

# floor(p * n) / ceil(p * m) guard against 0.1 * 30 = 2.9999... style rounding
PORTION_EPSILON = 1e-9


class StringEnum(StrEnum):
    @classmethod
    def names(cls):
        """Get the names in the order defined"""
        return [member.name for _, member in cls.__members__.items()]

    @classmethod
    def values(cls):
        """Get the values in the order defined"""
        return [member.value for _, member in cls.__members__.items()]

    @classmethod
    def parse(cls, value: str):
        try:
            return cls(value.strip())
        except ValueError:
            raise ValueError(
                f"unknown {cls.__name__} '{value}', valid values are: {', '.join(cls.values())}"
            ) from None

    @classmethod
    def parse_list(cls, text: str) -> Tuple:
        items = [item for item in text.split(",") if item.strip()]
        if not items:
            raise ValueError(f"empty {cls.__name__} list")
        return tuple(cls.parse(item) for item in items)


# Validation index identifiers, in report order.
class IndexId(StringEnum):
    WITHINDIS = "withindis"
    PSEP = "psep"
    CENTROID = "centroid"
    PEARSONGAMMA = "pearsongamma"
    WIDESTGAP = "widestgap"
    DENSDEC = "densdec"
    DENSBOUND = "densbound"
    HIGHDGAP = "highdgap"
    CVDENS = "cvdens"
    ENTROPY = "entropy"
    PARSIMONY = "parsimony"


DENSITY_INDEXES = (IndexId.DENSDEC, IndexId.DENSBOUND, IndexId.HIGHDGAP)


class Metric(StringEnum):
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"


# scipy.spatial.distance names
SCIPY_METRIC = {
    Metric.EUCLIDEAN: "euclidean",
    Metric.MANHATTAN: "cityblock",
}


# Random baseline clustering generators
class Generator(StringEnum):
    STUPIDCENT = "stupidcent"
    STUPIDNN = "stupidnn"


# Stable integer codes used when deriving random substreams
GENERATOR_CODE = {
    Generator.STUPIDCENT: 1,
    Generator.STUPIDNN: 2,
}


class CalibrationMode(StringEnum):
    PER_K = "per-k"
    POOLED = "pooled"
    RANK = "rank"
    NONE = "none"


class Method(StringEnum):
    KMEANS = "kmeans"
    PAM = "pam"
    SINGLE = "single"
    AVERAGE = "average"


class OutputFormat(StringEnum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"
