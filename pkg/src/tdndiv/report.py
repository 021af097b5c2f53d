"""Analysis reports: one metric suite per subsample fraction plus a table summary.

Serialisations:

* JSON, full precision, with a ``schema_version`` field;
* CSV, one row per fraction, the JSON row keys as header;
* a fixed-width text table with 6 significant digits, laid out as
  ``H'``, ``lambda x 10^4``, ``E_var`` per subsample block.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from tdndiv.freqtable import FrequencyTable, Mode, SubsampleSpec, TableSummary, summary
from tdndiv.metrics import MetricSuite, suite

SCHEMA_VERSION = 1
DEFAULT_FRACTIONS = (Fraction(1), Fraction(1, 5), Fraction(1, 10))

ROW_FIELDS = (
    "fraction",
    "mode",
    "shannon_h",
    "shannon_j",
    "brillouin_h",
    "simpson_lambda",
    "simpson_lambda_e4",
    "mcintosh_e",
    "e_var",
)
METRIC_FIELDS = ROW_FIELDS[2:]


@dataclass(frozen=True)
class AnalysisReport:
    dataset_name: str
    summary: TableSummary
    rows: tuple[tuple[SubsampleSpec, MetricSuite], ...]


def build_report(
    table: FrequencyTable,
    fractions: Iterable = DEFAULT_FRACTIONS,
    mode: Mode | str = Mode.TRUNCATED,
    dataset_name: str = "",
) -> AnalysisReport:
    specs = [SubsampleSpec(f, mode) for f in fractions]
    seen = [s.fraction for s in specs]
    if len(set(seen)) != len(seen):
        raise ValueError(f"fractions must be unique, got {[str(f) for f in seen]}")
    if not specs:
        raise ValueError("at least one fraction is required")
    rows = tuple((spec, suite(table, spec)) for spec in specs)
    return AnalysisReport(dataset_name, summary(table), rows)


def _row_dict(spec: SubsampleSpec, ms: MetricSuite) -> dict:
    row = {"fraction": float(spec.fraction), "mode": spec.mode.value}
    row.update(ms.as_dict())
    row["simpson_lambda_e4"] = ms.simpson_lambda_e4
    return {k: row[k] for k in ROW_FIELDS}


def report_to_dict(report: AnalysisReport) -> dict:
    s = report.summary
    rows = []
    for spec, ms in report.rows:
        # optional metrics are omitted rather than written as null
        rows.append({k: v for k, v in _row_dict(spec, ms).items() if v is not None})
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset_name": report.dataset_name,
        "summary": {
            "n": s.total,
            "richness": s.richness,
            "mean_p": s.mean_proportion,
            "sd_p": s.sd_proportion,
        },
        "rows": rows,
    }


def to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


def to_csv(report: AnalysisReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for spec, ms in report.rows:
        writer.writerow(_cell(v) for v in _row_dict(spec, ms).values())
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _g6(x: float | None) -> str:
    return "" if x is None else f"{x:.6g}"


def to_table(report: AnalysisReport) -> str:
    s = report.summary
    lines = [
        f"dataset: {report.dataset_name}",
        f"{'N':>12} {'R':>10} {'mean_p x1e6':>14} {'sd_p x1e6':>14}",
        f"{s.total:>12} {s.richness:>10} {_g6(s.mean_proportion * 1e6):>14} {_g6(s.sd_proportion * 1e6):>14}",
        "",
    ]
    head = []
    cells = []
    for spec, ms in report.rows:
        label = f"f={float(spec.fraction):g}"
        head += [f"H' {label}", f"lambda x1e4 {label}", f"E_var {label}"]
        cells += [_g6(ms.shannon_h), _g6(ms.simpson_lambda_e4), _g6(ms.e_var)]
    widths = [max(len(h), len(c)) for h, c in zip(head, cells)]
    lines.append("  ".join(h.rjust(w) for h, w in zip(head, widths)))
    lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines) + "\n"


def load_report(text: str) -> dict:
    """Parse a JSON report and check its schema version."""
    data = json.loads(text)
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema: {data.get('schema_version') if isinstance(data, dict) else data!r}")
    for key in ("summary", "rows"):
        if key not in data:
            raise ValueError(f"report lacks {key!r}")
    return data


def pooled_observations(reports: Sequence[dict], metric: str) -> list[tuple[int, float]]:
    """One ``(richness, value)`` pair per (report, row).

    The richness of a row is that of the evaluated subpopulation,
    ``ceil(fraction * R)``. Rows lacking ``metric`` (undefined for a single
    contributor) are left out.
    """
    obs = []
    for data in reports:
        r = int(data["summary"]["richness"])
        for row in data["rows"]:
            if metric not in row:
                continue
            spec = SubsampleSpec(float(row["fraction"]), row.get("mode", Mode.TRUNCATED))
            value = float(row[metric])
            if not math.isfinite(value):
                raise ValueError(f"non-finite {metric} in report {data.get('dataset_name')!r}")
            obs.append((spec.size(r), value))
    return obs
