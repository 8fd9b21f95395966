# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Reference clustering methods (K-means, PAM, single and average linkage)
and the adjusted Rand index against reference labels.
"""

# -----------------------
# Standard Python imports
# ----------------------

import logging

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

from scipy.cluster.hierarchy import linkage as scipy_linkage, cut_tree
from sklearn.cluster import KMeans
from sklearn.metrics import adjusted_rand_score

# --------------
# local imports
# -------------

from .constants import Metric, Method
from .core import (
    Clustering,
    DissimilarityMatrix,
    PointDataset,
    KOutOfRangeError,
    MalformedInputError,
    clustering_from_labels,
)

# -----------------------
# Module constants
# -----------------------

KMEANS_MAX_ITER = 300

# relative improvement below which a PAM swap is not taken
SWAP_TOLERANCE = 1e-12

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# ============
# Domain Types
# ============


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    clustering: Clustering
    method: Method
    objective: Optional[float] = None  # sum of squares, sum of medoid dissimilarities or cut height
    centers: Optional[np.ndarray] = None  # k-means center coordinates or PAM medoid indices
    history: Tuple[float, ...] = ()  # PAM total cost after BUILD and after every SWAP

    @property
    def K(self) -> int:
        return self.clustering.K

    @property
    def tag(self) -> str:
        return f"{self.method}-{self.K}"


# -------------------
# Auxiliary functions
# -------------------


def _check_k(n: int, K: int) -> None:
    if not 1 <= K <= n:
        raise KOutOfRangeError(f"K = {K} outside 1..{n}")


def _sum_of_squares(coords: np.ndarray, labels: np.ndarray, K: int):
    centers = np.array([coords[labels == j].mean(axis=0) for j in range(1, K + 1)])
    objective = float(((coords - centers[labels - 1]) ** 2).sum())
    return centers, objective


def _lloyd(coords: np.ndarray, init: np.ndarray) -> Clustering:
    model = KMeans(
        n_clusters=init.shape[0],
        init=init,
        n_init=1,
        algorithm="lloyd",
        tol=0.0,
        max_iter=KMEANS_MAX_ITER,
        random_state=0,
    )
    return clustering_from_labels(model.fit_predict(coords))


def _nearest_two(D: DissimilarityMatrix, medoids: np.ndarray):
    to_medoids = D.d[:, medoids]
    order = np.argsort(to_medoids, axis=1, kind="stable")
    nearest = order[:, 0]
    rows = np.arange(D.n)
    dnear = to_medoids[rows, nearest]
    dsecond = to_medoids[rows, order[:, 1]] if medoids.size > 1 else np.full(D.n, np.inf)
    return nearest, dnear, dsecond


def _pam_build(D: DissimilarityMatrix, K: int) -> np.ndarray:
    d = D.d
    medoids = [int(np.argmin(d.sum(axis=1)))]
    dnear = d[:, medoids[0]].copy()
    for _ in range(K - 1):
        gains = np.clip(dnear[:, None] - d, 0.0, None).sum(axis=0)
        gains[medoids] = -np.inf
        chosen = int(np.argmax(gains))
        medoids.append(chosen)
        np.minimum(dnear, d[:, chosen], out=dnear)
    return np.sort(np.array(medoids, dtype=np.int64))


def _pam_swap(D: DissimilarityMatrix, medoids: np.ndarray) -> Tuple[np.ndarray, List[float]]:
    d = D.d
    is_medoid = np.zeros(D.n, dtype=bool)
    history = list()
    while True:
        nearest, dnear, dsecond = _nearest_two(D, medoids)
        cost = float(dnear.sum())
        history.append(cost)
        is_medoid[:] = False
        is_medoid[medoids] = True
        # costs[i, h]: total cost after replacing medoids[i] by object h
        costs = np.empty((medoids.size, D.n))
        for i in range(medoids.size):
            kept = np.where(nearest == i, dsecond, dnear)
            costs[i] = np.minimum(kept[:, None], d).sum(axis=0)
        costs[:, is_medoid] = np.inf
        i, h = np.unravel_index(int(np.argmin(costs)), costs.shape)
        if costs[i, h] >= cost - SWAP_TOLERANCE * max(1.0, cost):
            return medoids, history
        log.debug("PAM swap medoid %d -> %d, cost %g -> %g", medoids[i], h, cost, costs[i, h])
        medoids = medoids.copy()
        medoids[i] = h
        medoids.sort()


# ===========
# Generic API
# ===========


def kmeans(
    points: PointDataset,
    K: int,
    rng: Optional[np.random.Generator] = None,
    restarts: int = 10,
    init: Optional[Sequence[Sequence[float]]] = None,
) -> ClusteringResult:
    """Best of several Lloyd runs started from K distinct random points (or from the given centers)"""
    if points.metric != Metric.EUCLIDEAN:
        raise MalformedInputError(f"k-means needs euclidean points, got {points.metric}")
    _check_k(points.n, K)
    coords = points.coords
    if init is not None:
        starts = [np.asarray(init, dtype=float).reshape(K, points.p)]
    else:
        rng = rng or np.random.default_rng()
        starts = [coords[rng.choice(points.n, size=K, replace=False)] for _ in range(max(1, restarts))]
    best = None
    for start in starts:
        C = _lloyd(coords, start)
        centers, objective = _sum_of_squares(coords, C.labels, C.K)
        if best is None or objective < best.objective:
            best = ClusteringResult(C, Method.KMEANS, objective, centers)
    log.info("[%s] sum of squares %g after %d runs", best.tag, best.objective, len(starts))
    return best


def pam(D: DissimilarityMatrix, K: int) -> ClusteringResult:
    """Partitioning around medoids, BUILD then steepest descent SWAP"""
    _check_k(D.n, K)
    medoids, history = _pam_swap(D, _pam_build(D, K))
    labels = np.argmin(D.d[:, medoids], axis=1)
    labels[medoids] = np.arange(K)
    C = clustering_from_labels(labels)
    objective = float(D.d[np.arange(D.n), medoids[labels]].sum())
    result = ClusteringResult(C, Method.PAM, objective, medoids, tuple(history))
    log.info("[%s] total dissimilarity to medoids %g", result.tag, objective)
    return result


def linkage(D: DissimilarityMatrix, method: Method, K: int) -> ClusteringResult:
    """Agglomerative clustering (single or UPGMA average linkage) cut at K clusters"""
    method = Method(method)
    if method not in (Method.SINGLE, Method.AVERAGE):
        raise ValueError(f"not a linkage method: {method}")
    _check_k(D.n, K)
    Z = scipy_linkage(np.ascontiguousarray(D.condensed), method=str(method))
    C = clustering_from_labels(cut_tree(Z, n_clusters=K).ravel())
    height = float(Z[D.n - K - 1, 2]) if K < D.n else 0.0
    result = ClusteringResult(C, method, height, None)
    log.info("[%s] dendrogram cut above height %g", result.tag, height)
    return result


def run_method(
    method: Method,
    K: int,
    D: DissimilarityMatrix,
    points: Optional[PointDataset] = None,
    rng: Optional[np.random.Generator] = None,
    restarts: int = 10,
) -> ClusteringResult:
    method = Method(method)
    if method == Method.KMEANS:
        if points is None:
            raise MalformedInputError("k-means needs point coordinates, not only dissimilarities")
        return kmeans(points, K, rng, restarts)
    if method == Method.PAM:
        return pam(D, K)
    return linkage(D, method, K)


def adjusted_rand(C1: Clustering, C2: Clustering) -> float:
    if C1.n != C2.n:
        raise MalformedInputError(f"clusterings of different sizes {C1.n} and {C2.n}")
    return float(adjusted_rand_score(C1.labels, C2.labels))
