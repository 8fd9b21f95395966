# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Run settings: environment (or .env) defaults through python-decouple,
overridden by an optional YAML run file, overridden in turn by command
line flags.
"""

# -----------------------
# Standard Python imports
# ----------------------

import math
import logging
import dataclasses

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

# -------------------
# Third party imports
# -------------------

import yaml
import decouple

# --------------
# local imports
# -------------

from .constants import IndexId, CalibrationMode, P_SEP, P_DENS, K_CV
from .constants import B as B_DEFAULT
from .core import BadConfigError, ValidationConfig

# ----------------
# Module constants
# ----------------

DEFAULT_KMAX = 10
DEFAULT_CONCURRENT = 4

YAML_KEYS = ("indexes", "calibration", "kmax", "k_range", "B", "seed", "normalise_weights", "p_sep", "p_dens", "k_cv")

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# ============
# Domain Types
# ============


@dataclass(frozen=True)
class RunSettings:
    indexes: Tuple[IndexId, ...] = tuple(IndexId)
    weights: Optional[Tuple[Tuple[IndexId, float], ...]] = None
    calibration: CalibrationMode = CalibrationMode.PER_K
    kmax: int = DEFAULT_KMAX
    k_range: Optional[Tuple[int, int]] = None
    B: int = B_DEFAULT
    seed: Optional[int] = None
    normalise_weights: bool = False
    p_sep: float = P_SEP
    p_dens: float = P_DENS
    k_cv: int = K_CV
    concurrent: int = DEFAULT_CONCURRENT

    def override(self, **kwargs) -> "RunSettings":
        """Replace the given fields, ignoring None values (flags not given)"""
        return dataclasses.replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def validation_config(self) -> ValidationConfig:
        return ValidationConfig(p_sep=self.p_sep, p_dens=self.p_dens, k_cv=self.k_cv, K_max=self.kmax, B=self.B)

    def weight_map(self) -> Dict[IndexId, float]:
        """Aggregation weights, 1 for every selected index when none are given"""
        if self.weights is None:
            return {index_id: 1.0 for index_id in self.indexes}
        return dict(self.weights)


# -------------------
# Auxiliary functions
# -------------------


def parse_weights(text: str) -> Dict[IndexId, float]:
    weights = dict()
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"weight '{item}' is not of the form index=weight")
        index_id = IndexId.parse(key)
        try:
            weight = float(value)
        except ValueError:
            raise ValueError(f"weight '{value}' for {index_id} is not a number") from None
        if not (math.isfinite(weight) and weight > 0.0):
            raise ValueError(f"weight for {index_id} must be positive, got {value}")
        if index_id in weights:
            raise ValueError(f"index {index_id} weighted twice")
        weights[index_id] = weight
    if not weights:
        raise ValueError("empty weight list")
    return weights


def parse_k_range(text: str) -> Tuple[int, int]:
    lo, sep, hi = str(text).partition("..")
    try:
        k_range = (int(lo), int(hi if sep else lo))
    except ValueError:
        raise ValueError(f"K range '{text}' is not of the form A..B") from None
    if not 1 <= k_range[0] <= k_range[1]:
        raise ValueError(f"K range '{text}' must satisfy 1 <= A <= B")
    return k_range


def _env_defaults(env: Callable) -> RunSettings:
    return RunSettings(
        p_sep=env("CLUSTERVAL_P_SEP", default=P_SEP, cast=float),
        p_dens=env("CLUSTERVAL_P_DENS", default=P_DENS, cast=float),
        k_cv=env("CLUSTERVAL_K_CV", default=K_CV, cast=int),
        B=env("CLUSTERVAL_B", default=B_DEFAULT, cast=int),
        concurrent=env("CLUSTERVAL_CONCURRENT", default=DEFAULT_CONCURRENT, cast=int),
    )


def _index_entries(entries: Any, path: str) -> Dict[str, Any]:
    if not isinstance(entries, list) or not entries:
        raise BadConfigError(f"{path}: 'indexes' must be a nonempty list")
    indexes, weights = list(), list()
    for entry in entries:
        if isinstance(entry, str):
            entry = {"index": entry}
        if not isinstance(entry, dict) or "index" not in entry:
            raise BadConfigError(f"{path}: bad index entry {entry!r}")
        index_id = IndexId.parse(str(entry["index"]))
        weight = float(entry.get("weight", 1.0))
        if not (math.isfinite(weight) and weight > 0.0):
            raise BadConfigError(f"{path}: weight for {index_id} must be positive, got {weight}")
        indexes.append(index_id)
        weights.append((index_id, weight))
    return {"indexes": tuple(indexes), "weights": tuple(weights)}


def _from_yaml(settings: RunSettings, path: str) -> RunSettings:
    with open(path) as f:
        try:
            doc = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise BadConfigError(f"{path}: not a YAML document: {e}") from e
    if doc is None:
        return settings
    if not isinstance(doc, dict):
        raise BadConfigError(f"{path}: expected a mapping at the top level")
    unknown = sorted(set(doc) - set(YAML_KEYS))
    if unknown:
        raise BadConfigError(f"{path}: unknown keys {unknown}, valid keys are {list(YAML_KEYS)}")
    values = dict()
    try:
        if "indexes" in doc:
            values.update(_index_entries(doc["indexes"], path))
        if "calibration" in doc:
            values["calibration"] = CalibrationMode.parse(str(doc["calibration"]))
        if "k_range" in doc:
            values["k_range"] = parse_k_range(doc["k_range"])
        for key, cast in (("kmax", int), ("B", int), ("seed", int), ("p_sep", float), ("p_dens", float), ("k_cv", int)):
            if key in doc:
                values[key] = cast(doc[key])
        if "normalise_weights" in doc:
            values["normalise_weights"] = bool(doc["normalise_weights"])
    except (TypeError, ValueError) as e:
        raise BadConfigError(f"{path}: {e}") from e
    if not 0 <= values.get("seed", 0) < 2**64:
        raise BadConfigError(f"{path}: seed {values['seed']} must be a 64 bit unsigned integer")
    log.info("Loaded run configuration from %s", path)
    return settings.override(**values)


# ===========
# Generic API
# ===========


def load_settings(path: Optional[str] = None, env: Callable = decouple.config) -> RunSettings:
    """Environment defaults overridden by the YAML run file, if any"""
    try:
        settings = _env_defaults(env)
    except ValueError as e:
        raise BadConfigError(f"environment: {e}") from e
    if path is not None:
        settings = _from_yaml(settings, path)
    return settings
