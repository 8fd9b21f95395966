# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Validation indexes that do not need a density estimate.

Every index returns an IndexValue holding its raw value and a normalised
value in [0, 1] where larger is better.
"""

# -----------------------
# Standard Python imports
# ----------------------

import math
import logging

from dataclasses import dataclass, field
from typing import Dict

# -------------------
# Third party imports
# -------------------

import numpy as np

from scipy.cluster import hierarchy
from scipy.spatial.distance import squareform

# --------------
# local imports
# -------------

from .constants import IndexId
from .core import (
    ClusterValError,
    Clustering,
    DissimilarityMatrix,
    KOutOfRangeError,
    portion_floor,
)

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# -----------------
# Custom Exceptions
# -----------------


class NoWithinPairsError(ClusterValError):
    pass


class RequiresTwoClustersError(ClusterValError):
    pass


class DegenerateCorrelationError(ClusterValError):
    pass


class InsufficientClusterSizesError(ClusterValError):
    pass


# ============
# Domain Types
# ============


@dataclass(frozen=True)
class IndexValue:
    index_id: IndexId
    raw: float
    normalised: float

    def as_dict(self) -> dict:
        return {"raw": self.raw, "normalised": self.normalised}


@dataclass
class IndexProfile:
    K: int
    values: Dict[IndexId, IndexValue] = field(default_factory=dict)
    failures: Dict[IndexId, str] = field(default_factory=dict)

    def add(self, value: IndexValue) -> None:
        if value.index_id in self.values:
            raise ValueError(f"duplicate index {value.index_id} in profile")
        self.values[value.index_id] = value

    def normalised(self, index_id: IndexId) -> float:
        return self.values[index_id].normalised


# -------------------
# Auxiliary functions
# -------------------


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _value(index_id: IndexId, raw: float, normalised: float) -> IndexValue:
    return IndexValue(index_id, float(raw), _clip01(float(normalised)))


def _require_two_clusters(C: Clustering) -> None:
    if C.K < 2:
        raise RequiresTwoClustersError(f"needs K >= 2, got K = {C.K}")


def within_sum(D: DissimilarityMatrix, C: Clustering) -> float:
    """Sum of the dissimilarities over the pairs of objects sharing a cluster"""
    return math.fsum(float(block.sum()) for block in C.blocks(D)) / 2.0


def mst_edge_weights(sub: np.ndarray) -> np.ndarray:
    """Edge weights of a minimum spanning tree of a dense dissimilarity matrix, ascending"""
    if sub.shape[0] < 2:
        return np.empty(0)
    # single linkage merge heights are the spanning tree edges, zero distances included
    return hierarchy.linkage(squareform(sub, checks=False), method="single")[:, 2]


# ===========
# Generic API
# ===========


def within_dis(D: DissimilarityMatrix, C: Clustering) -> IndexValue:
    pairs = C.within_pairs
    if pairs == 0:
        raise NoWithinPairsError("every cluster is a singleton")
    raw = within_sum(D, C) / pairs
    return _value(IndexId.WITHINDIS, raw, 1.0 - raw / D.require_positive_max())


def p_separation(D: DissimilarityMatrix, C: Clustering, p: float) -> IndexValue:
    _require_two_clusters(C)
    outside = np.where(C.same_cluster(), np.inf, D.d).min(axis=1)
    total, count = 0.0, 0
    for idx in C.members():
        m = max(1, portion_floor(p, idx.size))
        total += float(np.sort(outside[idx])[:m].sum())
        count += m
    raw = total / count
    return _value(IndexId.PSEP, raw, raw / D.require_positive_max())


def medoids(D: DissimilarityMatrix, C: Clustering) -> np.ndarray:
    """Object index of the medoid of every cluster, ties to the lowest index"""
    result = np.empty(C.K, dtype=np.int64)
    for j, (idx, block) in enumerate(zip(C.members(), C.blocks(D))):
        result[j] = idx[int(np.argmin(block.sum(axis=1)))]
    return result


def centroid_index(D: DissimilarityMatrix, C: Clustering) -> IndexValue:
    centers = medoids(D, C)
    raw = float(np.mean(D.d[np.arange(C.n), centers[C.labels - 1]]))
    return _value(IndexId.CENTROID, raw, 1.0 - raw / D.require_positive_max())


def pearson_gamma(D: DissimilarityMatrix, C: Clustering) -> IndexValue:
    """Correlation between the dissimilarities and the 0/1 different-cluster indicator of every pair"""
    _require_two_clusters(C)
    if D.spread == 0.0:
        raise DegenerateCorrelationError("constant dissimilarities")
    n_within = C.within_pairs
    if n_within == 0:
        raise DegenerateCorrelationError("every pair of objects is in different clusters")
    n_pairs = D.n * (D.n - 1) // 2
    n_between = n_pairs - n_within
    s_within = within_sum(D, C)
    mean_gap = (D.total - s_within) / n_between - s_within / n_within
    raw = mean_gap * math.sqrt(n_within * n_between) / (n_pairs * D.spread)
    raw = min(1.0, max(-1.0, raw))
    return _value(IndexId.PEARSONGAMMA, raw, (raw + 1.0) / 2.0)


def widest_gap(D: DissimilarityMatrix, C: Clustering) -> IndexValue:
    raw = 0.0
    for block in C.blocks(D):
        if block.shape[0] > 1:
            raw = max(raw, float(mst_edge_weights(block).max()))
    return _value(IndexId.WIDESTGAP, raw, 1.0 - raw / D.require_positive_max())


def kth_neighbour_distances(sub: np.ndarray, k: int) -> np.ndarray:
    """Dissimilarity of every object to its k-th nearest other object"""
    # the zero self dissimilarity is a row minimum, so the k-th other sits at position k
    return np.partition(sub, k, axis=1)[:, k]


def cv_density(D: DissimilarityMatrix, C: Clustering, k: int) -> IndexValue:
    weighted, total = 0.0, 0
    for block in C.blocks(D):
        m = block.shape[0]
        if m <= k:
            continue
        dk = kth_neighbour_distances(block, k)
        mean = float(dk.mean())
        cv = 0.0 if mean == 0.0 else float(dk.std(ddof=1)) / mean
        weighted += m * cv
        total += m
    if total == 0:
        raise InsufficientClusterSizesError(f"no cluster has more than k = {k} objects")
    raw = weighted / total
    return _value(IndexId.CVDENS, raw, 1.0 - raw / math.sqrt(C.n))


def entropy(C: Clustering) -> IndexValue:
    _require_two_clusters(C)
    shares = np.asarray(C.sizes, dtype=float) / C.n
    raw = float(-np.sum(shares * np.log(shares)))
    return _value(IndexId.ENTROPY, raw, raw / math.log(C.K))


def parsimony(C: Clustering, K_max: int) -> IndexValue:
    if not 1 <= C.K <= K_max:
        raise KOutOfRangeError(f"K = {C.K} outside 1..{K_max}")
    value = 1.0 - C.K / K_max
    return _value(IndexId.PARSIMONY, value, value)
