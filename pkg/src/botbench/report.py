"""CSV / markdown table emission and the run manifest."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

METRIC_COLUMNS = ("bal_accuracy", "precision", "recall", "mcc", "pr_auc", "roc_auc")
METRICS_HEADER = ("training_set", "feature_set", "algorithm") + METRIC_COLUMNS


def round3(value: float) -> str:
    """Half-even rounding to three decimals, as text."""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))


def full(value: float) -> str:
    return repr(float(value))


def metric_values(m) -> tuple[float, ...]:
    return (m.balanced_accuracy, m.precision, m.recall, m.mcc, m.pr_auc, m.roc_auc)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def to_markdown(header: Sequence[str], rows: Iterable[Sequence], title: str | None = None) -> str:
    lines = []
    if title:
        lines += [f"### {title}", ""]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def metrics_markdown(rows: Sequence[Sequence[str]]) -> str:
    """One block per (training set, feature set), one row per algorithm."""
    blocks = []
    groups: dict[tuple[str, str], list] = {}
    for row in rows:
        groups.setdefault((row[0], row[1]), []).append(row)
    for (ts, fs), members in groups.items():
        blocks.append(
            to_markdown(("algorithm",) + METRIC_COLUMNS, [r[2:] for r in members], title=f"{ts} / {fs}")
        )
    return "\n".join(blocks)


class Manifest:
    """Run manifest, written before any result and rewritten as files land."""

    def __init__(self, out_dir: Path, command: str, config: dict, seed: int):
        self.path = Path(out_dir) / "manifest.json"
        self.data = {
            "tool": "botbench",
            "version": __version__,
            "command": command,
            "seed": seed,
            "config": config,
            "started_at": _now(),
            "finished_at": None,
            "status": "running",
            "error": None,
            "files": [],
        }
        self.flush()

    def add(self, path: Path) -> None:
        name = str(Path(path).name)
        if name not in self.data["files"]:
            self.data["files"].append(name)
        self.flush()

    def finish(self, error: str | None = None) -> None:
        self.data["finished_at"] = _now()
        self.data["status"] = "failed" if error else "ok"
        self.data["error"] = error
        self.flush()

    def flush(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_text(path: Path, text: str, manifest: Manifest | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    if manifest is not None:
        manifest.add(path)
    return path


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
