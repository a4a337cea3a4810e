"""Session log and orientation-list serialization.

Logs are UTF-8 JSONL, one sample per line with canonical key order::

    {"t_ms":0,"q":[0.0,0.0,0.0,1.0],"a":[0.0,0.0,0.0],"w":[0.0,0.0,0.0]}

Floats are written with Python's shortest round-trip repr, so
parse(serialize(samples)) reproduces every field exactly and the output
bytes are deterministic and diffable.

Orientation lists (one quaternion per captured image, for offline
band/coverage analysis) are CSV with header ``image_id,qx,qy,qz,qw``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import (
    DuplicateImageIdError,
    MalformedLineError,
    MalformedRowError,
    NonFiniteError,
    NonMonotonicTimestampError,
    NonUnitQuaternionError,
    SphericapError,
)
from .gate import ImuSample
from .rotation import Quaternion

ORIENTATION_HEADER = ["image_id", "qx", "qy", "qz", "qw"]


@dataclass(frozen=True)
class OrientationRecord:
    image_id: str
    q: Quaternion


@dataclass(frozen=True)
class OrientationList:
    records: tuple[OrientationRecord, ...]

    def __len__(self) -> int:
        return len(self.records)


def _reject_constant(token: str):
    raise NonFiniteError(f"non-finite JSON value {token!r}")


def _vec3(obj, key: str, line_no: int) -> tuple[float, float, float]:
    v = obj.get(key)
    if not isinstance(v, list) or len(v) != 3:
        raise MalformedLineError(line_no, f"field {key!r} must be a 3-element array")
    out = []
    for x in v:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise MalformedLineError(line_no, f"field {key!r} has a non-numeric entry")
        if not math.isfinite(x):
            raise NonFiniteError(f"line {line_no}: field {key!r} is not finite")
        out.append(float(x))
    return (out[0], out[1], out[2])


def parse_log(text: str) -> list[ImuSample]:
    """Parse a JSONL log; raises with the offending line number."""
    samples: list[ImuSample] = []
    last_t: int | None = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line, parse_constant=_reject_constant)
        except NonFiniteError:
            raise
        except ValueError as e:
            raise MalformedLineError(line_no, f"invalid JSON ({e})") from None
        if not isinstance(obj, dict):
            raise MalformedLineError(line_no, "record is not a JSON object")
        missing = {"t_ms", "q", "a", "w"} - obj.keys()
        if missing:
            raise MalformedLineError(line_no, f"missing fields {sorted(missing)}")

        t_ms = obj["t_ms"]
        if isinstance(t_ms, bool) or not isinstance(t_ms, int):
            raise MalformedLineError(line_no, "t_ms must be an integer")
        if last_t is not None and t_ms <= last_t:
            raise NonMonotonicTimestampError(
                f"line {line_no}: timestamp {t_ms} does not increase past {last_t}"
            )
        last_t = t_ms

        qv = obj.get("q")
        if not isinstance(qv, list) or len(qv) != 4:
            raise MalformedLineError(line_no, "field 'q' must be a 4-element array")
        for x in qv:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise MalformedLineError(line_no, "field 'q' has a non-numeric entry")
        try:
            q = Quaternion(float(qv[0]), float(qv[1]), float(qv[2]), float(qv[3]))
        except NonUnitQuaternionError as e:
            raise NonUnitQuaternionError(f"line {line_no}: {e}") from None
        except NonFiniteError as e:
            raise NonFiniteError(f"line {line_no}: {e}") from None

        a = _vec3(obj, "a", line_no)
        w = _vec3(obj, "w", line_no)
        samples.append(ImuSample(t_ms=t_ms, q=q, a=a, omega=w))
    return samples


def serialize_log(samples: Iterable[ImuSample]) -> str:
    """Canonical JSONL serialization (round-trips through parse_log)."""
    lines = []
    for s in samples:
        rec = {
            "t_ms": s.t_ms,
            "q": [s.q.x, s.q.y, s.q.z, s.q.w],
            "a": list(s.a),
            "w": list(s.omega),
        }
        lines.append(json.dumps(rec, separators=(",", ":"), allow_nan=False))
    return "\n".join(lines) + ("\n" if lines else "")


def read_log(path: str | Path) -> list[ImuSample]:
    return parse_log(Path(path).read_bytes().decode("utf-8"))


def write_log(samples: Iterable[ImuSample], path: str | Path) -> None:
    Path(path).write_bytes(serialize_log(samples).encode("utf-8"))


def parse_orientations(text: str) -> OrientationList:
    """Parse an orientation CSV; header row is required."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRowError(1, "missing header row") from None
    if [h.strip() for h in header] != ORIENTATION_HEADER:
        raise MalformedRowError(1, f"header must be {','.join(ORIENTATION_HEADER)}")

    records: list[OrientationRecord] = []
    seen: set[str] = set()
    for row_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise MalformedRowError(row_no, f"expected 5 fields, got {len(row)}")
        image_id = row[0].strip()
        if not image_id:
            raise MalformedRowError(row_no, "empty image_id")
        if image_id in seen:
            raise DuplicateImageIdError(f"duplicate image_id {image_id!r} at row {row_no}")
        seen.add(image_id)
        try:
            comps = [float(x) for x in row[1:]]
        except ValueError:
            raise MalformedRowError(row_no, "non-numeric quaternion component") from None
        try:
            q = Quaternion(*comps)
        except SphericapError as e:
            raise MalformedRowError(row_no, str(e)) from None
        records.append(OrientationRecord(image_id=image_id, q=q))
    return OrientationList(records=tuple(records))


def read_orientations(path: str | Path) -> OrientationList:
    return parse_orientations(Path(path).read_bytes().decode("utf-8"))
