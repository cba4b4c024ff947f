"""
Reading the chain / metric / partition JSON files and writing deterministic reports.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ..exceptions import ValidationError


def file_sha256(path: Union[str, Path]) -> str:
    """Hex digest of the raw bytes of a file."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_json(path: Union[str, Path], required: Optional[str] = None) -> Dict[str, Any]:
    """
    Load a JSON object from disk.

    Raises:
        ValidationError: if the file is missing, unreadable, not a JSON object or lacks the required field
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"Input file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ValidationError(f"{path} must hold a JSON object")
    if required is not None and required not in data:
        raise ValidationError(f"{path} has no '{required}' field")
    return data


def to_jsonable(value: Any) -> Any:
    """Convert numpy containers and scalars into plain Python values."""
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isfinite(value):
            return value
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps_report(report: Dict[str, Any]) -> str:
    """Serialize a report byte-for-byte reproducibly (sorted keys, fixed separators)."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list) and len(value) > 0
        and all(isinstance(row, list) and all(isinstance(v, (int, float)) for v in row) for row in value)
    )


def _flatten(prefix: str, value: Any, scalars: list, matrices: list) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], scalars, matrices)
    elif _is_matrix(value):
        matrices.append((prefix, value))
    else:
        scalars.append((prefix, json.dumps(value, sort_keys=True)))


def dumps_tsv(report: Dict[str, Any]) -> str:
    """
    Tab-separated rendering of a report.

    Scalars and vectors become '# key: value' header lines; every matrix follows as
    'i<TAB>j<TAB>value' rows under a '# matrix: key' line.
    """
    scalars: list = []
    matrices: list = []
    _flatten("", to_jsonable(report), scalars, matrices)
    lines = [f"# {key}: {value}" for key, value in scalars]
    for key, matrix in matrices:
        lines.append(f"# matrix: {key}")
        for i, row in enumerate(matrix):
            for j, entry in enumerate(row):
                lines.append(f"{i}\t{j}\t{entry!r}")
    return "\n".join(lines) + "\n"
