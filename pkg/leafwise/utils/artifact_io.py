import enum
import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd

from leafwise.config.config import get_setting


def to_jsonable(value):
    """Plain JSON types for numpy scalars and arrays, complex numbers, Fractions, enums and tuples."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, Fraction):
        return str(value)
    return value


def dumps(payload) -> str:
    """Sorted keys, indent 2, shortest round-trip floats: identical bytes for identical payloads."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(file_path, payload):
    Path(file_path).parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps(payload))


def read_json(file_path):
    with open(file_path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_csv(file_path, table: pd.DataFrame):
    digits = get_setting('cli.csv_digits')
    Path(file_path).parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(file_path, index=False, float_format=f"%.{digits}g", lineterminator="\n")


def load_json_argument(argument: str):
    """A JSON file path, or a JSON literal given inline (e.g. --matrix "[[2,1],[1,1]]").
    Returns (data, digest) with the sha256 of the file bytes or of the literal."""
    if os.path.isfile(argument):
        with open(argument, 'rb') as f:
            raw = f.read()
        return json.loads(raw.decode('utf-8')), sha256_digest(raw)
    try:
        data = json.loads(argument)
    except json.JSONDecodeError as exc:
        raise ValueError(f"'{argument}' is neither an existing file nor a JSON literal ({exc.msg})") from exc
    return data, sha256_digest(argument.encode('utf-8'))


def sha256_digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()
