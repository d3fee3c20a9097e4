"""Row assembly and CSV / JSON / plain-table rendering for bound results."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .bounds import BoundReport, log10_int
from .model import GraphicalModel, model_stats, tightness_ratio

COLUMNS = ["instance", "n", "k", "r", "tr", "w", "asymptotic", "twb", "hwb"]


@dataclass
class Row:
    instance: str
    n: int
    k: int
    r: int
    tr: float
    w: int
    asymptotic: int
    twb: int
    hwb: int
    cm: int | None = None
    error: str | None = None

    @classmethod
    def from_report(cls, instance: str, model: GraphicalModel, report: BoundReport, cm=None):
        n, k, r, _ = model_stats(model)
        tr = tightness_ratio(model) if model.functions else math.nan
        return cls(instance, n, k, r, tr, report.width, report.asymptotic, report.twb, report.hwb, cm)

    @classmethod
    def failed(cls, instance: str, error: str) -> "Row":
        return cls(instance, 0, 0, 0, math.nan, 0, 0, 0, 0, None, error)


def format_log10(x: int) -> str:
    v = log10_int(x)
    if v == float("-inf"):
        return "-inf"
    return f"{round(v, 2):.2f}"


def format_tr(tr: float) -> str:
    return "nan" if math.isnan(tr) else f"{tr:.2f}"


def _cells(row: Row, log10: bool, with_cm: bool) -> list[str]:
    if row.error is not None:
        # error rows carry the marker in the n column; the rest stays empty
        return [row.instance, "ERROR"] + [""] * (len(COLUMNS) - 2 + with_cm)
    big = format_log10 if log10 else str
    cells = [
        row.instance, str(row.n), str(row.k), str(row.r), format_tr(row.tr), str(row.w),
        big(row.asymptotic), big(row.twb), big(row.hwb),
    ]
    if with_cm:
        cells.append("" if row.cm is None else big(row.cm))
    return cells


def to_csv(rows: list[Row], log10: bool = False, with_cm: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS + (["cm"] if with_cm else []))
    for row in rows:
        writer.writerow(_cells(row, log10, with_cm))
    return buf.getvalue()


def to_table(rows: list[Row], log10: bool = False, with_cm: bool = False) -> str:
    header = COLUMNS + (["cm"] if with_cm else [])
    body = [_cells(row, log10, with_cm) for row in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(wd) for h, wd in zip(header, widths))]
    for b in body:
        lines.append("  ".join(c.rjust(wd) for c, wd in zip(b, widths)))
    return "\n".join(lines) + "\n"


def row_dict(row: Row, report: BoundReport | None = None) -> dict:
    if row.error is not None:
        return {"instance": row.instance, "error": row.error}
    out = {
        "instance": row.instance,
        "n": row.n,
        "k": row.k,
        "r": row.r,
        "tr": None if math.isnan(row.tr) else round(row.tr, 6),
        "w": row.w,
        "asymptotic": row.asymptotic,
        "twb": row.twb,
        "hwb": row.hwb,
        "log10": {
            "asymptotic": format_log10(row.asymptotic),
            "twb": format_log10(row.twb),
            "hwb": format_log10(row.hwb),
        },
    }
    if row.cm is not None:
        out["cm"] = row.cm
        out["log10"]["cm"] = format_log10(row.cm)
    if report is not None:
        out["ordering_seed"] = report.ordering_seed
        out["ordering"] = list(report.ordering.sequence) if report.ordering else None
        out["per_cluster"] = report.to_dict()["per_cluster"]
    return out


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
