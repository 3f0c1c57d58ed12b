"""Text serializations of a ``RiskReport``.

Two forms: an aligned table for people (4 decimals, like the published
tables) and a flat ``key = value`` document holding every number at full
precision, which ``parse_kv`` reads back.
"""
from __future__ import annotations

from .criteria import CriterionKind, ReportRow, RiskReport

HEADER = ("Risk criterion", "Optimal (u,d)", "Objective value")


def _cells(row: ReportRow) -> tuple[str, str, str]:
    return (row.kind.label, f"({row.u:.4f}, {row.d:.4f})", f"{row.value:.4f}")


def format_table(report: RiskReport) -> str:
    body = [_cells(row) for row in report.rows]
    widths = [max(len(c) for c in col) for col in zip(HEADER, *body)]

    def line(cells):
        return " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = [line(HEADER), "-+-".join("-" * w for w in widths)]
    out += [line(cells) for cells in body]
    return "\n".join(out) + "\n"


def format_kv(report: RiskReport) -> str:
    lines = ["# risk report"]
    for key in sorted(report.metadata):
        value = str(report.metadata[key])
        if "\n" in value:
            raise ValueError(f"metadata value for {key!r} spans lines")
        lines.append(f"meta.{key} = {value}")
    for i, row in enumerate(report.rows):
        prefix = f"row.{i}"
        lines.append(f"{prefix}.criterion = {row.kind.value}")
        lines.append(f"{prefix}.direction = {row.kind.direction}")
        lines.append(f"{prefix}.u = {row.u!r}")
        lines.append(f"{prefix}.d = {row.d!r}")
        lines.append(f"{prefix}.value = {row.value!r}")
    return "\n".join(lines) + "\n"


def parse_kv(text: str) -> RiskReport:
    metadata: dict[str, str] = {}
    rows: dict[int, dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        key, sep, value = raw.partition(" = ")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        if key.startswith("meta."):
            metadata[key[5:]] = value
        elif key.startswith("row."):
            _, idx, field = key.split(".", 2)
            rows.setdefault(int(idx), {})[field] = value
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    parsed = []
    for idx in sorted(rows):
        f = rows[idx]
        kind = CriterionKind(f["criterion"])
        if f.get("direction", kind.direction) != kind.direction:
            raise ValueError(f"row {idx}: direction does not match {kind.value}")
        parsed.append(ReportRow(kind, float(f["u"]), float(f["d"]), float(f["value"])))
    return RiskReport(rows=tuple(parsed), metadata=metadata)
