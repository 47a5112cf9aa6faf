import csv
import json
import logging
import math
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from tunnelkit.constants import FLOAT_FORMAT, SCHEMA_VERSION
from tunnelkit.models.model import BaseModel

SUMMARY_FILE = "summary.json"


class Check(BaseModel):
    name: str
    value: Optional[float] = None
    threshold: Optional[float] = None
    passed: bool


def at_most(name: str, value: float, threshold: float) -> Check:
    value = float(value)
    return Check(
        name=name,
        value=value,
        threshold=float(threshold),
        passed=bool(math.isfinite(value) and value <= threshold),
    )


def at_least(name: str, value: Optional[float], threshold: float) -> Check:
    if value is None:
        return Check(name=name, threshold=float(threshold), passed=False)
    value = float(value)
    return Check(
        name=name,
        value=value,
        threshold=float(threshold),
        passed=bool(math.isfinite(value) and value >= threshold),
    )


def holds(name: str, condition: bool, value: Optional[float] = None) -> Check:
    return Check(
        name=name,
        value=None if value is None else float(value),
        passed=bool(condition),
    )


def strictly_decreasing(name: str, values: Sequence[float]) -> Check:
    return holds(name, all(b < a for a, b in zip(values, values[1:])))


class RunSummary(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: str
    experiment: str
    passed: bool
    checks: List[Check]
    metrics: Dict[str, Optional[float]]
    artifacts: List[str]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return FLOAT_FORMAT % float(value)


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.ndarray):
        return _json_safe(value.tolist())
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


class ArtifactWriter:
    """Scenario-scoped output directory; every file name is recorded once."""

    def __init__(self, output_dir: str, logger: Optional[logging.Logger] = None):
        self.output_dir = output_dir
        self.logger = logger or logging.getLogger(__name__)
        self.artifacts: List[str] = []
        os.makedirs(output_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _record(self, name: str):
        if name not in self.artifacts:
            self.artifacts.append(name)

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        path = self.path(name)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(value) for value in row])
        self._record(name)
        self.logger.debug("Wrote %s", path)
        return path

    def write_dict_rows(self, name: str, rows: List[Dict[str, Any]]) -> str:
        fieldnames: List[str] = []
        for row in rows:
            fieldnames.extend(key for key in row if key not in fieldnames)
        path = self.path(name)
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({key: format_value(row.get(key)) for key in fieldnames})
        self._record(name)
        return path

    def write_json(self, name: str, payload: Any) -> str:
        path = self.path(name)
        with open(path, "w") as f:
            json.dump(_json_safe(payload), f, indent=2, sort_keys=True)
            f.write("\n")
        self._record(name)
        self.logger.debug("Wrote %s", path)
        return path


def read_summary(output_dir: str) -> RunSummary:
    with open(os.path.join(output_dir, SUMMARY_FILE)) as f:
        return RunSummary.parse_obj(json.load(f))
