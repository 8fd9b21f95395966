# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Random baseline clusterings ("stupid" K-centroids and nearest neighbours)
and the collection of their index profiles used for calibration.

Every random clustering draws from its own PCG64 substream, seeded by
SeedSequence([master seed, generator code, K, replicate]), so that a
collection is reproduced bit by bit from the master seed regardless of
the evaluation order.
"""

# -----------------------
# Standard Python imports
# ----------------------

import asyncio
import logging

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

from lica.misc import group

# --------------
# local imports
# -------------

from .constants import IndexId, Generator, GENERATOR_CODE, DENSITY_INDEXES
from .core import (
    BadConfigError,
    Clustering,
    DissimilarityMatrix,
    KOutOfRangeError,
    MalformedInputError,
    ValidationConfig,
    clustering_from_labels,
)
from .indexes import IndexProfile
from .density import DensityKernel, density_kernel
from .profile import compute_profile

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# ============
# Domain Types
# ============


@dataclass(frozen=True)
class SeedPlan:
    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise BadConfigError(f"master seed must be a 64 bit unsigned integer, got {self.master_seed}")

    def seed_sequence(self, generator: Generator, K: int, replicate: int) -> np.random.SeedSequence:
        return np.random.SeedSequence([self.master_seed, GENERATOR_CODE[generator], K, replicate])

    def substream(self, generator: Generator, K: int, replicate: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence(generator, K, replicate)))


@dataclass(frozen=True, eq=False)
class RandomClustering:
    generator: Generator
    K: int
    replicate: int
    centers: Tuple[int, ...]  # the random set Q, 0-based object indices
    clustering: Clustering
    profile: IndexProfile

    def as_dict(self) -> dict:
        return {
            "generator": str(self.generator),
            "K": self.K,
            "replicate": self.replicate,
            "centers": [c + 1 for c in self.centers],
            "labels": self.clustering.as_list(),
            "values": {str(k): v.as_dict() for k, v in self.profile.values.items()},
            "failures": {str(k): v for k, v in self.profile.failures.items()},
        }


@dataclass(frozen=True, eq=False)
class RandomClusteringCollection:
    config: ValidationConfig
    master_seed: int
    selection: Tuple[IndexId, ...]
    members: Tuple[RandomClustering, ...]

    @property
    def k_values(self) -> Tuple[int, ...]:
        return tuple(sorted({m.K for m in self.members}))

    def for_k(self, K: Optional[int] = None) -> Iterator[RandomClustering]:
        return (m for m in self.members if K is None or m.K == K)

    def values(self, index_id: IndexId, K: Optional[int] = None) -> np.ndarray:
        """Normalised values of the clusterings where the index could be computed"""
        return np.array(
            [m.profile.normalised(index_id) for m in self.for_k(K) if index_id in m.profile.values],
            dtype=float,
        )

    def exclusions(self, index_id: IndexId, K: Optional[int] = None) -> int:
        return sum(1 for m in self.for_k(K) if index_id not in m.profile.values)

    def exclusion_counts(self) -> Dict[str, int]:
        return {str(index_id): self.exclusions(index_id) for index_id in self.selection}

    def to_dict(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "config": self.config.as_dict(),
            "indexes": [str(i) for i in self.selection],
            "clusterings": [m.as_dict() for m in self.members],
        }


# -------------------
# Auxiliary functions
# -------------------


def _check_k(D: DissimilarityMatrix, K: int) -> None:
    if not 1 <= K <= D.n:
        raise KOutOfRangeError(f"K = {K} outside 1..{D.n}")


def _draw_centers(D: DissimilarityMatrix, K: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(D.n, size=K, replace=False)


def _given_centers(D: DissimilarityMatrix, K: int, centers: Sequence[int]) -> np.ndarray:
    centers = np.asarray(centers, dtype=np.int64)
    if centers.size != K or np.unique(centers).size != K:
        raise MalformedInputError(f"need {K} distinct centers, got {list(centers)}")
    if centers.min() < 0 or centers.max() >= D.n:
        raise MalformedInputError(f"centers outside 1..{D.n}")
    return centers


def _task_list(config: ValidationConfig) -> List[Tuple[Generator, int, int]]:
    return [
        (generator, K, replicate)
        for K in config.k_values
        for generator in Generator
        for replicate in range(config.B)
    ]


def _evaluate(
    D: DissimilarityMatrix,
    config: ValidationConfig,
    plan: SeedPlan,
    selection: Tuple[IndexId, ...],
    kernel: Optional[DensityKernel],
    task: Tuple[Generator, int, int],
) -> RandomClustering:
    generator, K, replicate = task
    rng = plan.substream(generator, K, replicate)
    centers = _draw_centers(D, K, rng)
    func = stupid_kcentroids if generator == Generator.STUPIDCENT else stupid_nn
    C = func(D, K, centers=centers)
    profile = compute_profile(D, C, config, selection, kernel)
    return RandomClustering(generator, K, replicate, tuple(int(c) for c in centers), C, profile)


def _prepare(
    D: DissimilarityMatrix, config: ValidationConfig, master_seed: int, selection: Sequence[IndexId]
) -> Tuple[SeedPlan, Tuple[IndexId, ...], Optional[DensityKernel]]:
    if config.K_max > D.n:
        raise KOutOfRangeError(f"K_max = {config.K_max} exceeds the number of objects {D.n}")
    selection = tuple(i for i in IndexId if i in selection)
    needs_density = any(i in selection for i in DENSITY_INDEXES)
    kernel = density_kernel(D, config.p_dens) if needs_density else None
    log.info(
        "Generating %d random clusterings (B = %d, K = 2..%d, seed = %d)",
        2 * config.B * (config.K_max - 1),
        config.B,
        config.K_max,
        master_seed,
    )
    return SeedPlan(master_seed), selection, kernel


# ===========
# Generic API
# ===========


def stupid_kcentroids(
    D: DissimilarityMatrix,
    K: int,
    centers: Optional[Sequence[int]] = None,
    rng: Optional[np.random.Generator] = None,
) -> Clustering:
    """Assign every object to the closest of K random centroids"""
    _check_k(D, K)
    Q = _draw_centers(D, K, rng or np.random.default_rng()) if centers is None else _given_centers(D, K, centers)
    labels = np.argmin(D.d[:, Q], axis=1)
    labels[Q] = np.arange(K)
    return clustering_from_labels(labels)


def stupid_nn(
    D: DissimilarityMatrix,
    K: int,
    centers: Optional[Sequence[int]] = None,
    rng: Optional[np.random.Generator] = None,
) -> Clustering:
    """Grow K random singletons by repeatedly adding the closest unassigned object"""
    _check_k(D, K)
    Q = _draw_centers(D, K, rng or np.random.default_rng()) if centers is None else _given_centers(D, K, centers)
    d = D.d
    labels = np.full(D.n, -1, dtype=np.int64)
    labels[Q] = np.arange(K)
    assigned = labels >= 0
    barred = np.where(assigned, np.inf, 0.0)
    best = d[:, Q].min(axis=1)
    for _ in range(D.n - K):
        x = int(np.argmin(best + barred))
        # the closest assigned object, ties to the lowest index
        y = int(np.argmax(assigned & (d[x] == best[x])))
        labels[x] = labels[y]
        assigned[x] = True
        barred[x] = np.inf
        np.minimum(best, d[x], out=best)
    return clustering_from_labels(labels)


def generate_collection(
    D: DissimilarityMatrix,
    config: ValidationConfig,
    master_seed: int,
    selection: Sequence[IndexId] = tuple(IndexId),
) -> RandomClusteringCollection:
    plan, selection, kernel = _prepare(D, config, master_seed, selection)
    members = list()
    for K in config.k_values:
        for task in _task_list(config):
            if task[1] == K:
                members.append(_evaluate(D, config, plan, selection, kernel, task))
        log.info("[K=%d] %d random clusterings evaluated", K, 2 * config.B)
    return RandomClusteringCollection(config, master_seed, selection, tuple(members))


async def agenerate_collection(
    D: DissimilarityMatrix,
    config: ValidationConfig,
    master_seed: int,
    selection: Sequence[IndexId] = tuple(IndexId),
    concurrent: int = 4,
) -> RandomClusteringCollection:
    """Same collection as generate_collection, evaluated by worker threads in batches"""
    plan, selection, kernel = _prepare(D, config, master_seed, selection)
    members = list()
    for grp in group(max(1, concurrent), _task_list(config)):
        tasks = [
            asyncio.create_task(asyncio.to_thread(_evaluate, D, config, plan, selection, kernel, task))
            for task in grp
        ]
        members.extend(await asyncio.gather(*tasks))
    log.info("%d random clusterings evaluated by %d workers", len(members), concurrent)
    return RandomClusteringCollection(config, master_seed, selection, tuple(members))
