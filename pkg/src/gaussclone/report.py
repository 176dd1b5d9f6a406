"""Report rows and their table / CSV / JSON encodings.

Floats are written with 12 significant digits so output is byte-stable; M = inf
and infinite gains are the literal string ``inf``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields

from .analysis import INF
from .cloners import INDIVIDUAL, CloneReport

SIG_DIGITS = 12


@dataclass(frozen=True)
class ReportRow:
    machine: str
    N: int
    M: int | float
    epsilon: float
    r: float
    gain: float
    var_x: float
    var_p: float
    fidelity_analytic: float
    fidelity_circuit: float | None = None
    fidelity_mc: float | None = None
    mc_stderr: float | None = None
    seed: int | None = None

    @classmethod
    def from_report(cls, report: CloneReport, mc=None, seed: int | None = None) -> ReportRow:
        p = report.params
        gain = report.clone_gain if p.displacement == INDIVIDUAL else report.gain
        return cls(
            machine=report.machine,
            N=p.N,
            M=p.M,
            epsilon=report.epsilon,
            r=report.r,
            gain=gain,
            var_x=report.var_x,
            var_p=report.var_p,
            fidelity_analytic=report.fidelity_analytic,
            fidelity_circuit=report.fidelity_circuit,
            fidelity_mc=None if mc is None else mc.mean,
            mc_stderr=None if mc is None else mc.stderr,
            seed=None if mc is None else seed,
        )


FIELDS = [f.name for f in fields(ReportRow)]


def format_value(v) -> str:
    """Canonical text form of one field; ``None`` becomes the empty string."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v == 0.0:
            return "0"
        return format(v, f".{SIG_DIGITS}g")
    return str(v)


def json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if v == INF or (isinstance(v, float) and math.isinf(v)):
        return format_value(v)
    return float(format_value(v))


def row_dict(row: ReportRow) -> dict:
    return {k: json_value(v) for k, v in asdict(row).items()}


def to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for row in rows:
        writer.writerow([format_value(getattr(row, k)) for k in FIELDS])
    return buf.getvalue()


def to_json(rows) -> str:
    return "".join(json.dumps(row_dict(row)) + "\n" for row in rows)


def to_table(rows) -> str:
    cells = [FIELDS] + [[format_value(getattr(r, k)) or "-" for k in FIELDS] for r in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(FIELDS))]
    return "".join(
        "  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip() + "\n" for line in cells
    )


def render(rows, fmt: str) -> str:
    rows = list(rows)
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "json":
        return to_json(rows)
    if fmt == "table":
        return to_table(rows)
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(text: str) -> list[dict]:
    """Decode CSV written by :func:`to_csv` into JSON-comparable dicts."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        d = {}
        for k, v in rec.items():
            if v == "":
                d[k] = None
            elif k == "machine" or v == "inf":
                d[k] = v
            elif k in ("N", "seed") or (k == "M"):
                d[k] = int(v)
            else:
                d[k] = float(v)
        out.append(d)
    return out
