# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

"""
Validation reports: one row per clustering with raw, normalised and
calibrated index values, the aggregated score and the optional ARI
against reference labels. Rendered as an aligned text table (indexes
as rows, clusterings as columns), versioned JSON or long format CSV.
"""

# -----------------------
# Standard Python imports
# ----------------------

import io
import csv
import json
import logging

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

# -------------------
# Third party imports
# -------------------

from tabulate import tabulate

# --------------
# local imports
# -------------

from .constants import IndexId, SCHEMA_VERSION
from .core import MalformedInputError
from .indexes import IndexProfile
from .calibration import CalibratedProfile

# ----------------
# Module constants
# ----------------

CSV_HEADER = ("clustering", "method", "K", "index", "raw", "normalised", "calibrated")
MISSING = "-"

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split(".")[-1])

# ============
# Domain Types
# ============


@dataclass
class ReportRow:
    name: str
    method: str
    K: int
    raw: Dict[str, float] = field(default_factory=dict)
    normalised: Dict[str, float] = field(default_factory=dict)
    calibrated: Dict[str, float] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)
    aggregate: Optional[float] = None
    ari: Optional[float] = None

    @classmethod
    def from_profiles(
        cls,
        name: str,
        method: str,
        profile: IndexProfile,
        calibrated: Optional[CalibratedProfile] = None,
        aggregate: Optional[float] = None,
        ari: Optional[float] = None,
    ) -> "ReportRow":
        row = cls(name=name, method=str(method), K=profile.K, aggregate=aggregate, ari=ari)
        for index_id, value in profile.values.items():
            row.raw[str(index_id)] = value.raw
            row.normalised[str(index_id)] = value.normalised
        row.failures.update({str(k): v for k, v in profile.failures.items()})
        if calibrated is not None:
            row.calibrated.update({str(k): v for k, v in calibrated.values.items()})
            row.failures.update({str(k): v for k, v in calibrated.failures.items() if str(k) not in row.failures})
        return row

    def sort_key(self):
        return (self.method, self.K, self.name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "method": self.method,
            "K": self.K,
            "raw": self.raw,
            "normalised": self.normalised,
            "calibrated": self.calibrated,
            "failures": self.failures,
            "aggregate": self.aggregate,
            "ari": self.ari,
        }


@dataclass
class Report:
    rows: List[ReportRow]
    metadata: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def calibrated(self) -> bool:
        return any(row.calibrated for row in self.rows)

    def index_ids(self) -> List[str]:
        present = set()
        for row in self.rows:
            present.update(row.normalised)
            present.update(row.failures)
        return [str(i) for i in IndexId if str(i) in present]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "metadata": self.metadata,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise MalformedInputError(f"unsupported report schema version {version}")
        return cls([ReportRow(**row) for row in doc["rows"]], doc.get("metadata", {}), version)

    def to_table(self, floatfmt: str = ".3f") -> str:
        source = "calibrated" if self.calibrated else "normalised"
        headers = ["index"] + [row.name for row in self.rows]
        table = list()
        for index_id in self.index_ids():
            cells = [getattr(row, source).get(index_id) for row in self.rows]
            table.append([index_id] + cells)
        if any(row.aggregate is not None for row in self.rows):
            table.append(["A"] + [row.aggregate for row in self.rows])
        if any(row.ari is not None for row in self.rows):
            table.append(["ARI"] + [row.ari for row in self.rows])
        text = f"{source.capitalize()} index values\n"
        text += tabulate(table, headers=headers, floatfmt=floatfmt, missingval=MISSING)
        randoms = self.metadata.get("random_aggregates")
        if randoms:
            text += "\n\nA over the random clusterings\n"
            text += tabulate(
                [[r["K"], r["mean"], r["sd"], r["count"]] for r in randoms],
                headers=["K", "mean", "sd", "count"],
                floatfmt=floatfmt,
                missingval=MISSING,
            )
        return text + "\n"

    def to_csv(self) -> str:
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            for index_id in self.index_ids():
                if index_id not in row.normalised:
                    continue
                writer.writerow(
                    (
                        row.name,
                        row.method,
                        row.K,
                        index_id,
                        repr(row.raw[index_id]),
                        repr(row.normalised[index_id]),
                        repr(row.calibrated[index_id]) if index_id in row.calibrated else "",
                    )
                )
        return stream.getvalue()


# ===========
# Generic API
# ===========


def build_report(rows: Sequence[ReportRow], metadata: Dict[str, Any]) -> Report:
    return Report(sorted(rows, key=ReportRow.sort_key), dict(metadata))
