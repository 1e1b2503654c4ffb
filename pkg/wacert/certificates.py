"""
Certificate documents
Canonical JSON encoding (sorted keys, exact rationals as strings, no
floats), atomic file output and the golden-subset comparison.
"""

import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, List

import orjson

from wacert.config import Config
from wacert.errors import InvalidInputError

_INT64 = 1 << 63


def to_jsonable(value: Any) -> Any:
    """Convert certificate payloads to JSON-ready values without losing exactness."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        # orjson only handles 64-bit integers
        return value if -_INT64 <= value < _INT64 else str(value)
    if isinstance(value, float):
        raise InvalidInputError(f"float {value!r} in a certificate")
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return str(value)


def envelope(kind: str, body: dict, ok: bool) -> dict:
    return {"schema": Config.CERT_SCHEMA, "kind": kind, "ok": ok, **body}


def canonical_bytes(doc: dict) -> bytes:
    return orjson.dumps(to_jsonable(doc), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2) + b"\n"


def write_atomic(path, doc: dict) -> Path:
    """Write next to the target and rename, so readers never see a partial file."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(canonical_bytes(doc))
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def load(path) -> dict:
    try:
        return orjson.loads(Path(path).read_bytes())
    except orjson.JSONDecodeError as exc:
        raise InvalidInputError(f"certificate {path} is not valid JSON: {exc}") from exc


def subset_mismatches(expected: Any, produced: Any, where: str = "$") -> List[str]:
    """Paths at which `produced` disagrees with the golden `expected` (extra keys allowed)."""
    if isinstance(expected, dict):
        if not isinstance(produced, dict):
            return [f"{where}: expected an object"]
        out = []
        for key, value in expected.items():
            if key not in produced:
                out.append(f"{where}.{key}: missing")
            else:
                out.extend(subset_mismatches(value, produced[key], f"{where}.{key}"))
        return out
    if isinstance(expected, list):
        if not isinstance(produced, list) or len(produced) != len(expected):
            return [f"{where}: expected a list of length {len(expected)}"]
        out = []
        for i, (e, p) in enumerate(zip(expected, produced)):
            out.extend(subset_mismatches(e, p, f"{where}[{i}]"))
        return out
    if expected != produced:
        return [f"{where}: expected {expected!r}, got {produced!r}"]
    return []
