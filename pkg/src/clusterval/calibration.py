# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Calibration of normalised index values against the random clusterings
and their aggregation into a single weighted score A(C).

z-score modes (per-k, pooled) pool only random clusterings. The rank mode
pools the random clusterings of every K together with the candidates.
"""

# -----------------------
# Standard Python imports
# ----------------------

import math
import logging

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

from scipy.stats import rankdata

# --------------
# local imports
# -------------

from .constants import IndexId, CalibrationMode
from .core import ClusterValError, BadConfigError
from .indexes import IndexProfile
from .random_clusterings import RandomClusteringCollection

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# -----------------
# Custom Exceptions
# -----------------


class DegenerateCalibrationError(ClusterValError):
    pass


class KNotInCollectionError(ClusterValError):
    pass


class MissingIndexError(ClusterValError):
    pass


class BadWeightError(ClusterValError):
    pass


# ============
# Domain Types
# ============


@dataclass
class CalibratedProfile:
    K: int
    mode: CalibrationMode
    values: Dict[IndexId, float] = field(default_factory=dict)
    failures: Dict[IndexId, str] = field(default_factory=dict)


@dataclass(frozen=True)
class AggregationSpec:
    weights: Tuple[Tuple[IndexId, float], ...]

    def __post_init__(self):
        if not self.weights:
            raise BadConfigError("at least one index must be selected for aggregation")
        seen = set()
        for index_id, weight in self.weights:
            if index_id in seen:
                raise BadConfigError(f"index {index_id} selected twice")
            seen.add(index_id)
            if not (math.isfinite(weight) and weight > 0.0):
                raise BadWeightError(f"weight for {index_id} must be positive, got {weight}")

    @classmethod
    def from_mapping(cls, weights: Mapping[IndexId, float]) -> "AggregationSpec":
        return cls(tuple((IndexId(k), float(w)) for k, w in weights.items()))

    @classmethod
    def uniform(cls, indexes: Iterable[IndexId]) -> "AggregationSpec":
        return cls(tuple((IndexId(k), 1.0) for k in indexes))

    @property
    def indexes(self) -> Tuple[IndexId, ...]:
        return tuple(index_id for index_id, _ in self.weights)

    def normalised(self) -> "AggregationSpec":
        total = math.fsum(w for _, w in self.weights)
        return AggregationSpec(tuple((index_id, w / total) for index_id, w in self.weights))

    def as_dict(self) -> Dict[str, float]:
        return {str(index_id): w for index_id, w in self.weights}


@dataclass(frozen=True)
class PoolStats:
    mean: float
    sd: float
    count: int
    excluded: int


@dataclass(frozen=True)
class RandomAggregate:
    """A over the random clusterings of one K, the K-bias balance check"""

    K: int
    mean: Optional[float]
    sd: Optional[float]
    count: int

    def as_dict(self) -> dict:
        return {"K": self.K, "mean": self.mean, "sd": self.sd, "count": self.count}


# -------------------
# Auxiliary functions
# -------------------


def _reason(e: Exception) -> str:
    return f"{type(e).__name__}: {e}"


def pool_stats(collection: RandomClusteringCollection, index_id: IndexId, K: Optional[int] = None) -> PoolStats:
    pool = collection.values(index_id, K)
    excluded = collection.exclusions(index_id, K)
    where = "all K" if K is None else f"K = {K}"
    if pool.size < 2:
        raise DegenerateCalibrationError(f"{pool.size} usable random values for {index_id} ({where})")
    sd = float(np.std(pool, ddof=1))
    if sd == 0.0:
        raise DegenerateCalibrationError(f"zero spread of random {index_id} values ({where})")
    return PoolStats(float(np.mean(pool)), sd, int(pool.size), excluded)


class ZScoreCalibrator:
    """Per K or pooled z-scores with pool statistics computed once per index"""

    def __init__(self, collection: RandomClusteringCollection, mode: CalibrationMode):
        if mode not in (CalibrationMode.PER_K, CalibrationMode.POOLED):
            raise ValueError(f"not a z-score calibration mode: {mode}")
        self.collection = collection
        self.mode = mode
        self._stats = dict()

    def stats(self, index_id: IndexId, K: int) -> PoolStats:
        key = (index_id, K if self.mode == CalibrationMode.PER_K else None)
        if key not in self._stats:
            try:
                self._stats[key] = pool_stats(self.collection, *key)
            except DegenerateCalibrationError as e:
                log.warning("%s", e)
                self._stats[key] = e
        result = self._stats[key]
        if isinstance(result, Exception):
            raise result
        return result

    def calibrate(self, profile: IndexProfile) -> CalibratedProfile:
        if self.mode == CalibrationMode.PER_K and profile.K not in self.collection.k_values:
            raise KNotInCollectionError(
                f"K = {profile.K} not among the random clusterings K = {list(self.collection.k_values)}"
            )
        result = CalibratedProfile(profile.K, self.mode, failures=dict(profile.failures))
        for index_id, value in profile.values.items():
            if index_id not in self.collection.selection:
                result.failures[index_id] = f"MissingIndexError: {index_id} not evaluated on the random clusterings"
                continue
            try:
                stats = self.stats(index_id, profile.K)
            except DegenerateCalibrationError as e:
                result.failures[index_id] = _reason(e)
                continue
            result.values[index_id] = (value.normalised - stats.mean) / stats.sd
        return result


def _rank_pool(
    collection: RandomClusteringCollection, profiles: Sequence[IndexProfile]
) -> Tuple[List[CalibratedProfile], List[CalibratedProfile]]:
    """Rank scores of the random clusterings and of the candidates sharing one pool per index"""
    members = collection.members
    randoms = [CalibratedProfile(m.K, CalibrationMode.RANK, failures=dict(m.profile.failures)) for m in members]
    candidates = [CalibratedProfile(p.K, CalibrationMode.RANK, failures=dict(p.failures)) for p in profiles]
    everything = [m.profile for m in members] + list(profiles)
    outputs = randoms + candidates
    for index_id in IndexId:
        where = [i for i, p in enumerate(everything) if index_id in p.values]
        if not where:
            continue
        if index_id not in collection.selection:
            for i in where:
                outputs[i].failures[index_id] = f"MissingIndexError: {index_id} not evaluated on the random clusterings"
            continue
        m = len(where)
        if m < 2:
            for i in where:
                outputs[i].failures[index_id] = f"DegenerateCalibrationError: rank pool of size {m} for {index_id}"
            continue
        ranks = rankdata([everything[i].normalised(index_id) for i in where], method="average")
        for i, rank in zip(where, ranks):
            outputs[i].values[index_id] = float((rank - 1.0) / (m - 1))
    return randoms, candidates


def _identity(profile: IndexProfile) -> CalibratedProfile:
    return CalibratedProfile(
        profile.K,
        CalibrationMode.NONE,
        {k: v.normalised for k, v in profile.values.items()},
        dict(profile.failures),
    )


# ===========
# Generic API
# ===========


def calibrate_per_k(profile: IndexProfile, collection: RandomClusteringCollection) -> CalibratedProfile:
    return ZScoreCalibrator(collection, CalibrationMode.PER_K).calibrate(profile)


def calibrate_pooled(profile: IndexProfile, collection: RandomClusteringCollection) -> CalibratedProfile:
    return ZScoreCalibrator(collection, CalibrationMode.POOLED).calibrate(profile)


def calibrate_rank(
    profiles: Sequence[IndexProfile], collection: RandomClusteringCollection
) -> List[CalibratedProfile]:
    _, candidates = _rank_pool(collection, profiles)
    return candidates


def calibrate_all(
    profiles: Sequence[IndexProfile],
    collection: Optional[RandomClusteringCollection],
    mode: CalibrationMode,
) -> List[CalibratedProfile]:
    """Calibrate every candidate in the given mode, recording per index failures"""
    log.info("Calibrating %d clusterings, mode %s", len(profiles), mode)
    if mode == CalibrationMode.NONE:
        return [_identity(p) for p in profiles]
    if mode == CalibrationMode.RANK:
        return calibrate_rank(profiles, collection)
    calibrator = ZScoreCalibrator(collection, mode)
    results = list()
    for profile in profiles:
        try:
            results.append(calibrator.calibrate(profile))
        except KNotInCollectionError as e:
            log.warning("%s", e)
            results.append(
                CalibratedProfile(profile.K, mode, failures={index_id: _reason(e) for index_id in profile.values})
            )
    return results


def aggregate(calibrated: CalibratedProfile, spec: AggregationSpec) -> float:
    """Weighted sum of the selected calibrated index values"""
    missing = [str(index_id) for index_id in spec.indexes if index_id not in calibrated.values]
    if missing:
        raise MissingIndexError(f"calibrated values missing for {', '.join(missing)}")
    for index_id, weight in spec.weights:
        if weight <= 0.0:
            raise BadWeightError(f"weight for {index_id} must be positive, got {weight}")
    return math.fsum(weight * calibrated.values[index_id] for index_id, weight in spec.weights)


def aggregate_random(
    collection: RandomClusteringCollection,
    spec: AggregationSpec,
    mode: CalibrationMode,
    candidates: Sequence[IndexProfile] = (),
) -> List[RandomAggregate]:
    if mode == CalibrationMode.RANK:
        calibrated, _ = _rank_pool(collection, candidates)
    elif mode == CalibrationMode.NONE:
        calibrated = [_identity(m.profile) for m in collection.members]
    else:
        calibrator = ZScoreCalibrator(collection, mode)
        calibrated = [calibrator.calibrate(m.profile) for m in collection.members]
    by_k = {K: list() for K in collection.k_values}
    for member, cal in zip(collection.members, calibrated):
        try:
            by_k[member.K].append(aggregate(cal, spec))
        except MissingIndexError:
            pass
    result = list()
    for K, scores in by_k.items():
        excluded = sum(1 for _ in collection.for_k(K)) - len(scores)
        if excluded:
            log.debug("[K=%d] %d random clusterings without A", K, excluded)
        mean = math.fsum(scores) / len(scores) if scores else None
        sd = float(np.std(scores, ddof=1)) if len(scores) > 1 else None
        result.append(RandomAggregate(K, mean, sd, len(scores)))
    return result
