"""CSV export and import of trajectories, search traces, sweeps and calibration scans.

Floats are written with ``repr`` (shortest text that parses back to the same
double), so reading a written file reproduces the rows exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence

from .dynamics import Sample
from .errors import ValidationError
from .optimizer import IterationRecord, StepRule, SweepRow

__all__ = ["Schema", "TRAJECTORY", "TRACE", "SWEEP", "CALIBRATION",
           "write_csv", "read_csv", "dumps", "loads"]


def _bool_out(b):
    return "true" if b else "false"


def _bool_in(text):
    if text not in ("true", "false"):
        raise ValueError(f"expected true/false, got {text!r}")
    return text == "true"


@dataclass(frozen=True)
class Schema:
    header: tuple[str, ...]
    to_fields: Callable[[object], Sequence]
    from_fields: Callable[[list[str]], object]


TRAJECTORY = Schema(
    ("t", "x", "v", "a"),
    lambda s: (s.t, s.x, s.v, s.a),
    lambda f: Sample(*map(float, f)),
)

TRACE = Schema(
    ("j", "lambda", "x_max", "p", "s", "J", "rule", "clamped"),
    lambda r: (r.j, r.lambda_j, r.x_max_j, r.p_j, r.s_j, r.j_value, r.step_rule.value,
               _bool_out(r.clamped)),
    lambda f: IterationRecord(int(f[0]), float(f[1]), float(f[2]), int(f[3]), float(f[4]),
                              float(f[5]), StepRule(f[6]), _bool_in(f[7])),
)

SWEEP = Schema(
    ("lambda", "x_max", "J"),
    lambda r: (r.lam, r.x_max, r.j_value),
    lambda f: SweepRow(*map(float, f)),
)

CALIBRATION = Schema(
    ("x_m", "lambda_star"),
    lambda r: r,
    lambda f: tuple(map(float, f)),
)


def _text(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps(rows, schema: Schema) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema.header)
    for row in rows:
        writer.writerow([_text(v) for v in schema.to_fields(row)])
    return buf.getvalue()


def loads(text: str, schema: Schema) -> list:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("empty CSV, expected a header line") from None
    if tuple(header) != schema.header:
        raise ValidationError(f"CSV header {header!r} does not match {list(schema.header)!r}")
    rows = []
    for lineno, fields in enumerate(reader, start=2):
        if len(fields) != len(schema.header):
            raise ValidationError(f"line {lineno}: expected {len(schema.header)} fields, "
                                  f"got {len(fields)}")
        try:
            rows.append(schema.from_fields(fields))
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return rows


def write_csv(path, rows, schema: Schema) -> None:
    text = dumps(rows, schema)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from exc


def read_csv(path, schema: Schema) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads(fh.read(), schema)
