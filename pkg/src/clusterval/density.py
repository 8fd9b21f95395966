# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Dissimilarity based kernel density estimate and the density indexes
densdec (density decreasing from the cluster modes), densbound (cluster
borders through density valleys) and highdgap (density weighted widest gap).

The kernel is k(t) = (1 - t/q) 1(t <= q), with the bandwidth q taken as
an empirical quantile of the pairwise dissimilarities. Every object
contributes its own self term k(0) = 1 to its density.
"""

# -----------------------
# Standard Python imports
# ----------------------

import math
import logging

from dataclasses import dataclass
from typing import Optional, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

# --------------
# local imports
# -------------

from .constants import IndexId
from .core import Clustering, DissimilarityMatrix, portion_ceil
from .indexes import IndexValue

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# ============
# Domain Types
# ============


@dataclass(frozen=True, eq=False)
class DensityKernel:
    """Clustering independent part of the density estimate"""

    q: float
    k: np.ndarray  # n x n kernel weights k(d(x, y))
    h: np.ndarray  # raw densities, self term included


@dataclass(frozen=True, eq=False)
class DensityProfile:
    q: float
    h: np.ndarray
    h_star: np.ndarray
    h_o: np.ndarray
    h_o_star: np.ndarray


@dataclass(frozen=True)
class GapSet:
    T: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.T)


# -------------------
# Auxiliary functions
# -------------------


def dissimilarity_quantile(D: DissimilarityMatrix, p: float) -> float:
    """Smallest pairwise dissimilarity with at least ceil(p*m) of the m values below or equal to it"""
    values = np.sort(D.condensed)
    rank = max(1, portion_ceil(p, values.size))
    return float(values[rank - 1])


def _traverse(sub: np.ndarray, hs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Order in which a cluster is grown from its density mode by repeatedly adding
    the object closest to the sequence, with the sequence member it attaches to.
    Ties go to the lowest local index in both cases."""
    m = sub.shape[0]
    seed = int(np.argmax(hs))
    in_seq = np.zeros(m, dtype=bool)
    in_seq[seed] = True
    barred = np.zeros(m)
    barred[seed] = np.inf
    best = sub[seed].copy()
    added = np.empty(m - 1, dtype=np.int64)
    attached = np.empty(m - 1, dtype=np.int64)
    for t in range(m - 1):
        x = int(np.argmin(best + barred))
        added[t] = x
        attached[t] = np.argmax(in_seq & (sub[x] == best[x]))
        in_seq[x] = True
        barred[x] = np.inf
        np.minimum(best, sub[x], out=best)
    return added, attached


# ===========
# Generic API
# ===========


def density_kernel(D: DissimilarityMatrix, p: float) -> DensityKernel:
    q = dissimilarity_quantile(D, p)
    if q > 0.0:
        k = np.clip(1.0 - D.d / q, 0.0, None)
    else:
        k = (D.d == 0.0).astype(float)
    k.flags.writeable = False
    h = k.sum(axis=1)
    h.flags.writeable = False
    log.debug("Kernel bandwidth q = %g for p = %g", q, p)
    return DensityKernel(q, k, h)


def density_profile(
    D: DissimilarityMatrix, C: Clustering, p: float, kernel: Optional[DensityKernel] = None
) -> DensityProfile:
    kernel = density_kernel(D, p) if kernel is None else kernel
    h_max = float(kernel.h.max())
    h_o = np.where(C.same_cluster(), 0.0, kernel.k).sum(axis=1)
    return DensityProfile(
        q=kernel.q,
        h=kernel.h,
        h_star=kernel.h / h_max,
        h_o=h_o,
        h_o_star=h_o / h_max,
    )


def densdec_and_gaps(
    D: DissimilarityMatrix, C: Clustering, profile: DensityProfile
) -> Tuple[IndexValue, GapSet]:
    h_star = profile.h_star
    penalty = 0.0
    gaps = list()
    for idx, sub in zip(C.members(), C.blocks(D)):
        if idx.size < 2:
            continue
        hs = h_star[idx]
        added, attached = _traverse(sub, hs)
        # highest density still outside the sequence when each object is added
        remaining = np.maximum.accumulate(hs[added][::-1])[::-1]
        gaps.extend((remaining * sub[added, attached]).tolist())
        rise = hs[added] - hs[attached]
        penalty += float(np.sum(np.square(rise[rise > 0.0])))
    raw = math.sqrt(penalty / C.n)
    value = IndexValue(IndexId.DENSDEC, raw, min(1.0, max(0.0, 1.0 - raw)))
    return value, GapSet(tuple(gaps))


def highdgap(gaps: GapSet, d_max: float) -> IndexValue:
    raw = max(gaps.T) if gaps.T else 0.0
    normalised = 1.0 - raw / d_max if d_max > 0.0 else 1.0
    return IndexValue(IndexId.HIGHDGAP, float(raw), min(1.0, max(0.0, normalised)))


def densbound(C: Clustering, profile: DensityProfile) -> IndexValue:
    raw = float(np.mean(profile.h_star * profile.h_o_star))
    return IndexValue(IndexId.DENSBOUND, raw, min(1.0, max(0.0, 1.0 - raw)))
