"""Experiment reports: tabular results with embedded pass/fail decisions.

Every row carries its own slack (quadrature tolerance, 3 MC standard errors,
bootstrap spread, ...) so no comparison is a bare floating-point equality.
CSV output is byte-deterministic for a fixed seed: fixed column order and
round-trip float repr, no timestamps.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ExperimentReport", "emit_report"]


def _fmt(value) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ExperimentReport:
    kind: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(bool(row.get("passed", True)) for row in self.rows)

    @property
    def failures(self) -> list[dict]:
        return [row for row in self.rows if not bool(row.get("passed", True))]

    def add(self, **row) -> dict:
        self.rows.append(row)
        return row

    def config_hash(self, text: str) -> None:
        self.meta["config_hash"] = hashlib.sha256(text.encode()).hexdigest()[:16]

    def to_csv(self, path) -> Path:
        path = Path(path)
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(row.get(c, "")) for c in self.columns))
        path.write_text("\n".join(lines) + "\n")
        return path

    def to_json(self, path) -> Path:
        path = Path(path)
        payload = {
            "kind": self.kind,
            "columns": self.columns,
            "rows": self.rows,
            "meta": self.meta,
            "all_passed": self.all_passed,
        }
        text = json.dumps(
            payload,
            sort_keys=True,
            indent=2,
            default=lambda o: o.item() if isinstance(o, np.generic) else str(o),
        )
        path.write_text(text + "\n")
        return path

    @classmethod
    def from_json(cls, path) -> "ExperimentReport":
        payload = json.loads(Path(path).read_text())
        return cls(
            kind=payload["kind"],
            columns=list(payload["columns"]),
            rows=list(payload["rows"]),
            meta=dict(payload["meta"]),
        )

    def to_svg(
        self,
        path,
        x: str = "n",
        observed: str = "observed",
        bound: str = "bound",
        series: str = "eps",
        floor: float = 1e-6,
    ) -> Path:
        """Log-log plot of observed vs bound across x, one series per eps value.

        Observed values at or below `floor` are clipped to it (gaps can be
        negative; log axes cannot show them).
        """
        import matplotlib

        matplotlib.use("Agg")
        matplotlib.rcParams["svg.hashsalt"] = "robustclt"
        import matplotlib.pyplot as plt

        rows = [
            r
            for r in self.rows
            if r.get(series) is not None and r.get(x) is not None and r.get(observed) is not None
        ]
        fig, ax = plt.subplots(figsize=(7.0, 5.0))
        for sv in sorted({r[series] for r in rows}):
            pts = sorted((r[x], r[observed], r.get(bound)) for r in rows if r[series] == sv)
            xs = [p[0] for p in pts]
            obs = [max(p[1], floor) for p in pts]
            line, = ax.loglog(xs, obs, marker="o", label=f"{series}={sv:g} observed")
            line.set_gid(f"series-{series}-{sv:g}-observed")
            if all(p[2] is not None for p in pts):
                bnd = [max(p[2], floor) for p in pts]
                bline, = ax.loglog(xs, bnd, linestyle="--", label=f"{series}={sv:g} bound")
                bline.set_gid(f"series-{series}-{sv:g}-bound")
        ax.set_xlabel(x)
        ax.set_ylabel(f"value (clipped at {floor:g})")
        ax.set_title(self.kind)
        if rows:
            ax.legend(fontsize=8)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        return Path(path)


def emit_report(report: ExperimentReport, formats, out_dir) -> list[Path]:
    """Write the report in each requested format; returns the file paths."""
    if not report.rows:
        raise ValueError("report has no rows")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(formats, str):
        formats = [formats]
    written = []
    for fmt in formats:
        target = out_dir / f"{report.kind}.{fmt}"
        if fmt == "csv":
            written.append(report.to_csv(target))
        elif fmt == "json":
            written.append(report.to_json(target))
        elif fmt == "svg":
            written.append(report.to_svg(target))
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    return written
