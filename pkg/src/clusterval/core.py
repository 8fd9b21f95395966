# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Data model shared by every validation index: dissimilarity matrices,
point datasets, partitions and the validation configuration.

Objects are indexed 0..n-1 internally. Cluster labels are canonical,
1..K in order of first appearance.
"""

# -----------------------
# Standard Python imports
# ----------------------

import math
import logging

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

from scipy.spatial.distance import pdist, squareform

# --------------
# local imports
# -------------

from .constants import Metric, SCIPY_METRIC, SYMMETRY_TOLERANCE, PORTION_EPSILON, P_SEP, P_DENS, K_CV
from .constants import B as B_DEFAULT

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# -----------------
# Custom Exceptions
# -----------------


class ClusterValError(Exception):
    """Base class for every error raised by this package"""


class MalformedInputError(ClusterValError):
    pass


class InputTooSmallError(ClusterValError):
    pass


class AsymmetricInputError(ClusterValError):
    pass


class NegativeDissimilarityError(ClusterValError):
    pass


class BadDiagonalError(ClusterValError):
    pass


class ZeroDissimilarityError(ClusterValError):
    """All dissimilarities are zero, d_max normalisations are undefined"""


class KOutOfRangeError(ClusterValError):
    pass


class BadConfigError(ClusterValError):
    pass


# -------------------
# Auxiliary functions
# -------------------


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


# ============
# Domain Types
# ============


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    """Validated symmetric nonnegative matrix with zero diagonal"""

    d: np.ndarray
    d_max: float

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @cached_property
    def pair_index(self) -> Tuple[np.ndarray, np.ndarray]:
        """Row and column indices (i < j) of the n(n-1)/2 unordered pairs"""
        iu, ju = np.triu_indices(self.n, k=1)
        return _frozen(iu), _frozen(ju)

    @cached_property
    def condensed(self) -> np.ndarray:
        """Dissimilarities of the unordered pairs, in pair_index order"""
        iu, ju = self.pair_index
        return _frozen(self.d[iu, ju])

    @cached_property
    def total(self) -> float:
        """Sum of the pairwise dissimilarities"""
        return float(self.condensed.sum())

    @cached_property
    def spread(self) -> float:
        """Population standard deviation of the pairwise dissimilarities, 0 when they are all equal"""
        values = self.condensed
        return 0.0 if np.ptp(values) == 0.0 else float(values.std())

    def require_positive_max(self) -> float:
        if self.d_max <= 0.0:
            raise ZeroDissimilarityError("all dissimilarities are zero (d_max = 0)")
        return self.d_max

    def take(self, order: Sequence[int]) -> "DissimilarityMatrix":
        """Same matrix with objects reordered"""
        order = np.asarray(order)
        return DissimilarityMatrix(_frozen(self.d[np.ix_(order, order)].copy()), self.d_max)

    def scaled(self, factor: float) -> "DissimilarityMatrix":
        return DissimilarityMatrix(_frozen(self.d * factor), self.d_max * factor)


@dataclass(frozen=True, eq=False)
class PointDataset:
    coords: np.ndarray  # n x p
    metric: Metric = Metric.EUCLIDEAN

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def p(self) -> int:
        return self.coords.shape[1]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], metric: Metric = Metric.EUCLIDEAN) -> "PointDataset":
        rows = list(rows)
        if not rows:
            raise InputTooSmallError("no points given")
        dims = {len(row) for row in rows}
        if len(dims) != 1:
            raise MalformedInputError(f"points with different dimensions: {sorted(dims)}")
        if dims.pop() < 1:
            raise MalformedInputError("points must have at least one coordinate")
        try:
            coords = np.asarray(rows, dtype=float)
        except ValueError as e:
            raise MalformedInputError(f"non numeric coordinate: {e}") from e
        if not np.all(np.isfinite(coords)):
            raise MalformedInputError("non finite coordinate")
        return cls(_frozen(coords), Metric(metric))


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition of n objects into K nonempty clusters"""

    labels: np.ndarray  # canonical labels 1..K
    K: int
    sizes: Tuple[int, ...]

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @cached_property
    def _members(self) -> Tuple[np.ndarray, ...]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum((0,) + self.sizes)
        return tuple(_frozen(order[bounds[j]: bounds[j + 1]]) for j in range(self.K))

    def members(self) -> Tuple[np.ndarray, ...]:
        """Ascending object indices of every cluster, cluster 1 first"""
        return self._members

    @property
    def within_pairs(self) -> int:
        return sum(m * (m - 1) // 2 for m in self.sizes)

    def blocks(self, D: "DissimilarityMatrix") -> Tuple[np.ndarray, ...]:
        """Read only within-cluster submatrices of D, cluster 1 first"""
        return _within_blocks(D, self)

    def same_cluster(self) -> np.ndarray:
        """n x n boolean matrix, True where both objects share a cluster"""
        return self.labels[:, None] == self.labels[None, :]

    def take(self, order: Sequence[int]) -> "Clustering":
        return clustering_from_labels(self.labels[np.asarray(order)])

    def as_list(self) -> list:
        return [int(label) for label in self.labels]


@dataclass(frozen=True)
class ValidationConfig:
    p_sep: float = P_SEP
    p_dens: float = P_DENS
    k_cv: int = K_CV
    K_max: int = 10
    B: int = B_DEFAULT

    def __post_init__(self):
        if not 0.0 < self.p_sep <= 1.0:
            raise BadConfigError(f"p_sep must be in (0, 1], got {self.p_sep}")
        if not 0.0 < self.p_dens <= 1.0:
            raise BadConfigError(f"p_dens must be in (0, 1], got {self.p_dens}")
        if self.k_cv < 1:
            raise BadConfigError(f"k_cv must be >= 1, got {self.k_cv}")
        if self.K_max < 2:
            raise BadConfigError(f"K_max must be >= 2, got {self.K_max}")
        if self.B < 2:
            raise BadConfigError(f"B must be >= 2, got {self.B}")

    @property
    def k_values(self) -> range:
        return range(2, self.K_max + 1)

    def as_dict(self) -> dict:
        return {
            "p_sep": self.p_sep,
            "p_dens": self.p_dens,
            "k_cv": self.k_cv,
            "K_max": self.K_max,
            "B": self.B,
        }


# ===========
# Generic API
# ===========


def build_dissimilarity(points: PointDataset) -> DissimilarityMatrix:
    if points.n < 2:
        raise InputTooSmallError(f"need at least 2 points, got {points.n}")
    d = squareform(pdist(points.coords, metric=SCIPY_METRIC[points.metric]))
    log.debug("Built %dx%d %s dissimilarity matrix", points.n, points.n, points.metric)
    return DissimilarityMatrix(_frozen(d), float(d.max()))


def load_dissimilarity(matrix, tolerance: float = SYMMETRY_TOLERANCE) -> DissimilarityMatrix:
    try:
        d = np.array(matrix, dtype=float)
    except ValueError as e:
        raise MalformedInputError(f"non numeric dissimilarity: {e}") from e
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MalformedInputError(f"dissimilarity matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if n < 2:
        raise InputTooSmallError(f"need at least 2 objects, got {n}")
    if not np.all(np.isfinite(d)):
        raise MalformedInputError("non finite dissimilarity")
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDissimilarityError(f"negative dissimilarity d({i + 1},{j + 1}) = {d[i, j]}")
    diagonal = np.abs(np.diag(d))
    if np.any(diagonal > tolerance):
        i = int(np.argmax(diagonal))
        raise BadDiagonalError(f"nonzero diagonal d({i + 1},{i + 1}) = {d[i, i]}")
    asym = np.abs(d - d.T)
    if np.any(asym > tolerance):
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise AsymmetricInputError(
            f"asymmetric entries d({i + 1},{j + 1}) = {d[i, j]} and d({j + 1},{i + 1}) = {d[j, i]}"
        )
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return DissimilarityMatrix(_frozen(d), float(d.max()))


def clustering_from_labels(raw_labels: Sequence[int]) -> Clustering:
    raw = np.asarray(raw_labels)
    if raw.ndim != 1 or raw.size == 0:
        raise MalformedInputError("labels must be a nonempty sequence")
    if not np.issubdtype(raw.dtype, np.integer):
        raise MalformedInputError(f"labels must be integers, got {raw.dtype}")
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(1, first.size + 1)
    labels = rank[inverse.ravel()]
    sizes = tuple(int(s) for s in np.bincount(labels)[1:])
    return Clustering(_frozen(labels), len(sizes), sizes)


# keyed by object identity, latest pairs only
@lru_cache(maxsize=8)
def _within_blocks(D: DissimilarityMatrix, C: Clustering) -> Tuple[np.ndarray, ...]:
    return tuple(_frozen(D.d[np.ix_(idx, idx)]) for idx in C.members())


def check_same_size(D: DissimilarityMatrix, C: Clustering) -> None:
    if D.n != C.n:
        raise MalformedInputError(f"clustering has {C.n} labels but the data has {D.n} objects")


def portion_floor(p: float, count: int) -> int:
    return int(math.floor(p * count + PORTION_EPSILON))


def portion_ceil(p: float, count: int) -> int:
    return int(math.ceil(p * count - PORTION_EPSILON))
