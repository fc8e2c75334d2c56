"""
Serialization of verification reports to JSON and CSV.
"""

import dataclasses
import json
import logging
import math
import os
from typing import Dict, Iterable, List, Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

IDENTITY_COLUMNS = ["identity", "model", "params", "lhs", "rhs", "residual", "tolerance", "verdict",
                    "resolution", "empty_domain"]
STABILITY_COLUMNS = ["alpha", "beta", "mu0", "R", "inf", "argmin", "verdict"]
CSV_FLOAT_FORMAT = "%.17g"


def _float(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return value


def _key(key) -> str:
    if dataclasses.is_dataclass(key):
        return ",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in dataclasses.astuple(key))
    return str(key)


def to_jsonable(obj):
    """Plain JSON values; infinite floats become "inf"/"-inf", dataclass keys become "a,b"."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    return obj


def write_json(payload, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(to_jsonable(payload), f, indent=2, default=str)
    logger.info(f"Report saved to: {path}")
    return path


def load_report(path: str) -> Dict:
    with open(path) as f:
        return json.load(f)


def _cell(value):
    if isinstance(value, dict):
        return ";".join(f"{k}={v}" for k, v in value.items())
    if isinstance(value, float):
        return _float(value)
    return value


def rows_frame(rows: Iterable[Dict], columns: Sequence[str]) -> pd.DataFrame:
    """DataFrame restricted to a fixed column set, dict cells flattened to k=v pairs."""
    records: List[Dict] = [{column: _cell(row.get(column)) for column in columns} for row in rows]
    return pd.DataFrame(records, columns=list(columns))


def write_csv(rows: Iterable[Dict], columns: Sequence[str], path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    rows_frame(rows, columns).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"CSV saved to: {path}")
    return path
