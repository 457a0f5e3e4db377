"""Chord, driving, and report file formats.

Structured JSON inputs and CSV outputs, floats always written with 17
significant digits so re-runs are byte-identical and values round-trip
exactly through the text form.
"""

from __future__ import annotations

import json
from typing import List, Sequence, Union

import numpy as np

from .errors import InvalidInputError
from .surgery import LEDGER_COLUMNS, ReversalLedger
from .verify import CheckResult
from .zipper import Chord, DrivingFunction, Segment

SCHEMA_VERSION = 1
CLOCK = "a_t=t"


def fmt(x: float) -> str:
    """17-significant-digit decimal form; round-trips every double."""
    return format(float(x), ".17g")


def chord_to_json(curve: Union[Chord, Segment]) -> str:
    if isinstance(curve, Chord):
        start, end = curve.start, curve.end
    else:
        start, end = curve.base, None
    rows = ",\n    ".join(
        f"[{fmt(v.real)}, {fmt(v.imag)}]" for v in curve.vertices
    )
    end_txt = "null" if end is None else fmt(end)
    return (
        "{\n"
        f'  "schema_version": {SCHEMA_VERSION},\n'
        f'  "start": {fmt(start)},\n'
        f'  "end": {end_txt},\n'
        f'  "vertices": [\n    {rows}\n  ]\n'
        "}\n"
    )


def chord_from_json(text: str, *, validate: bool = True) -> Union[Chord, Segment]:
    """Parse a chord file; `end: null` marks an open segment."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInputError("chord file must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidInputError(
            f"field 'schema_version' must be {SCHEMA_VERSION}, "
            f"got {doc.get('schema_version')!r}"
        )
    for name in ("start", "vertices"):
        if name not in doc:
            raise InvalidInputError(f"missing field {name!r}")
    raw = doc["vertices"]
    if not isinstance(raw, list) or not raw:
        raise InvalidInputError("field 'vertices' must be a non-empty list")
    verts = np.empty(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InvalidInputError(f"vertices[{i}] must be a [re, im] pair")
        verts[i] = complex(float(pair[0]), float(pair[1]))
    end = doc.get("end")
    if end is None:
        curve: Union[Chord, Segment] = Segment(float(doc["start"]), verts)
    else:
        curve = Chord(float(doc["start"]), float(end), verts)
    if validate:
        curve.validate()
    return curve


def driving_to_json(driving: DrivingFunction) -> str:
    rows = ",\n    ".join(
        f"[{fmt(t)}, {fmt(l)}]" for t, l in zip(driving.t, driving.lam)
    )
    return (
        "{\n"
        f'  "schema_version": {SCHEMA_VERSION},\n'
        f'  "clock": "{CLOCK}",\n'
        f'  "samples": [\n    {rows}\n  ]\n'
        "}\n"
    )


def driving_from_json(text: str) -> DrivingFunction:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInputError("driving file must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidInputError(
            f"field 'schema_version' must be {SCHEMA_VERSION}, "
            f"got {doc.get('schema_version')!r}"
        )
    if doc.get("clock") != CLOCK:
        raise InvalidInputError(f"field 'clock' must be '{CLOCK}'")
    raw = doc.get("samples")
    if not isinstance(raw, list) or not raw:
        raise InvalidInputError("field 'samples' must be a non-empty list")
    t = np.empty(len(raw))
    lam = np.empty(len(raw))
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InvalidInputError(f"samples[{i}] must be a [t, lambda] pair")
        t[i] = float(pair[0])
        lam[i] = float(pair[1])
    return DrivingFunction(t, lam)


def ledger_to_csv(ledgers: Sequence[tuple]) -> str:
    """CSV of (k, ReversalLedger) pairs with a leading k column."""
    lines = ["k," + ",".join(LEDGER_COLUMNS)]
    for k, ledger in ledgers:
        for rec in ledger.as_records():
            lines.append(",".join([str(k), str(rec[0])] + [fmt(v) for v in rec[1:]]))
    return "\n".join(lines) + "\n"


def checks_to_csv(results: List[CheckResult]) -> str:
    lines = ["name,passed,observed,bound,witness"]
    for r in results:
        lines.append(
            f"{r.name},{int(r.passed)},{fmt(r.observed)},{fmt(r.bound)},{r.witness}"
        )
    return "\n".join(lines) + "\n"
