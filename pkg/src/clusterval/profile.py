# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# -----------------------
# Standard Python imports
# ----------------------

import logging

from typing import Optional, Sequence

# --------------
# local imports
# -------------

from .constants import IndexId, DENSITY_INDEXES
from .core import ClusterValError, Clustering, DissimilarityMatrix, ValidationConfig, check_same_size
from .indexes import (
    IndexProfile,
    within_dis,
    p_separation,
    centroid_index,
    pearson_gamma,
    widest_gap,
    cv_density,
    entropy,
    parsimony,
)
from .density import DensityKernel, density_profile, densdec_and_gaps, densbound, highdgap

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

SIMPLE_INDEXES = {
    IndexId.WITHINDIS: lambda D, C, cfg: within_dis(D, C),
    IndexId.PSEP: lambda D, C, cfg: p_separation(D, C, cfg.p_sep),
    IndexId.CENTROID: lambda D, C, cfg: centroid_index(D, C),
    IndexId.PEARSONGAMMA: lambda D, C, cfg: pearson_gamma(D, C),
    IndexId.WIDESTGAP: lambda D, C, cfg: widest_gap(D, C),
    IndexId.CVDENS: lambda D, C, cfg: cv_density(D, C, cfg.k_cv),
    IndexId.ENTROPY: lambda D, C, cfg: entropy(C),
    IndexId.PARSIMONY: lambda D, C, cfg: parsimony(C, cfg.K_max),
}

# -------------------
# Auxiliary functions
# -------------------


def _density_indexes(
    D: DissimilarityMatrix,
    C: Clustering,
    config: ValidationConfig,
    selection: Sequence[IndexId],
    kernel: Optional[DensityKernel],
    profile: IndexProfile,
) -> None:
    wanted = [index_id for index_id in DENSITY_INDEXES if index_id in selection]
    if not wanted:
        return
    try:
        dens = density_profile(D, C, config.p_dens, kernel)
        values = dict()
        if IndexId.DENSDEC in wanted or IndexId.HIGHDGAP in wanted:
            values[IndexId.DENSDEC], gaps = densdec_and_gaps(D, C, dens)
            values[IndexId.HIGHDGAP] = highdgap(gaps, D.d_max)
        values[IndexId.DENSBOUND] = densbound(C, dens)
    except ClusterValError as e:
        for index_id in wanted:
            profile.failures[index_id] = f"{type(e).__name__}: {e}"
        return
    for index_id in wanted:
        profile.add(values[index_id])


# ===========
# Generic API
# ===========


def compute_profile(
    D: DissimilarityMatrix,
    C: Clustering,
    config: ValidationConfig,
    selection: Sequence[IndexId] = tuple(IndexId),
    kernel: Optional[DensityKernel] = None,
) -> IndexProfile:
    """Evaluate the selected indexes, recording per index failures instead of raising"""
    check_same_size(D, C)
    profile = IndexProfile(K=C.K)
    for index_id in SIMPLE_INDEXES:
        if index_id not in selection:
            continue
        try:
            profile.add(SIMPLE_INDEXES[index_id](D, C, config))
        except ClusterValError as e:
            profile.failures[index_id] = f"{type(e).__name__}: {e}"
            log.debug("[K=%d] %s not computed: %s", C.K, index_id, e)
    _density_indexes(D, C, config, selection, kernel, profile)
    return profile
