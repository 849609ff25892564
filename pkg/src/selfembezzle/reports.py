"""Run reports and their CSV / JSON / SVG renderings."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable


@dataclass
class RunReport:
    experiment: str
    config: dict
    rows: list[dict]
    summary: dict
    verdicts: dict[str, bool]
    duration: float = field(default=0.0, compare=False)
    chart: dict | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "config": self.config,
            "summary": self.summary,
            "verdicts": self.verdicts,
            "passed": self.passed,
            "rows": self.rows,
        }
        if include_timing:
            out["duration_s"] = self.duration
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=False, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def to_svg(self) -> str | None:
        if not self.chart:
            return None
        return svg_line_chart(**self.chart)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".15g")
    if value is None:
        return ""
    return str(value)


def rows_to_csv(rows: list[dict]) -> str:
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in header])
    return buf.getvalue()


def svg_line_chart(
    xs: list[float],
    ys: list[float],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 480,
    height: int = 320,
) -> str:
    """Single polyline chart with axis labels and min/max tick values."""
    margin = 50
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def py(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    b = height - margin
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{b}" x2="{width - margin}" y2="{b}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{b}" stroke="black"/>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{points}"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {height / 2})">{ylabel}</text>',
        f'<text x="{margin}" y="{b + 15}" font-size="10">{x0:.6g}</text>',
        f'<text x="{width - margin}" y="{b + 15}" text-anchor="end" font-size="10">{x1:.6g}</text>',
        f'<text x="{margin - 4}" y="{b}" text-anchor="end" font-size="10">{y0:.6g}</text>',
        f'<text x="{margin - 4}" y="{margin + 4}" text-anchor="end" font-size="10">{y1:.6g}</text>',
        "</svg>",
        "",
    ])


def write_report(report: RunReport, out: str | None, formats: tuple[str, ...], include_timing: bool = False) -> list[Path]:
    """Write the requested formats next to `out` (a path stem); return the files written."""
    stem = Path(out) if out else Path(report.experiment)
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "json":
            text = report.to_json(include_timing)
        elif fmt == "csv":
            text = report.to_csv()
        elif fmt == "svg":
            text = report.to_svg()
            if text is None:
                continue
        else:
            raise ValueError(f"unknown format {fmt!r}")
        path = stem.with_suffix("." + fmt)
        path.write_text(text)
        written.append(path)
    return written


def merge_reports(reports: list[dict], recheck: Callable[[str, list[dict]], dict[str, bool]]) -> dict:
    """Summarize several JSON reports, re-deriving each verdict from its rows."""
    entries = []
    for rep in reports:
        again = recheck(rep["experiment"], rep["rows"])
        entries.append({
            "experiment": rep["experiment"],
            "seed": rep["config"].get("seed"),
            "rows": len(rep["rows"]),
            "verdicts": rep["verdicts"],
            "rechecked": again,
            "consistent": again == rep["verdicts"],
            "passed": all(again.values()),
        })
    entries.sort(key=lambda e: (e["experiment"], str(e["seed"])))
    return {
        "experiments": entries,
        "all_passed": all(e["passed"] and e["consistent"] for e in entries),
    }

