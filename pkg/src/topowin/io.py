"""Artifact serialization shared by the pipeline and the CLI.

Every writer is deterministic: floats are serialized with ``repr`` (exact
round-trip), JSON keys are sorted, CSV rows follow a fixed order.  Reading
then rewriting an artifact reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classify import EvaluationReport
from .distance import DistanceMatrix
from .errors import DataError
from .ingest import StandardizationParams, TimeSeries
from .persistence import PersistenceDiagram
from .pointcloud import AugmentedCloud
from .windowing import LabeledWindow


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def stage_key(stage: str, parent: str | None, params) -> str:
    payload = json.dumps(
        {"stage": stage, "parent": parent, "params": params}, sort_keys=True, default=str
    )
    return sha256_bytes(payload.encode("utf-8"))[:16]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        return header, [row for row in reader if row]


def write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path: Path):
    if not Path(path).exists():
        raise DataError(f"no such file: {path}")
    return json.loads(Path(path).read_text(encoding="utf-8"))


# --- series ---------------------------------------------------------------

def write_series_csv(series: TimeSeries, path: Path) -> None:
    header = ["timestamp", *series.channel_names, "label"]
    rows = (
        [repr(float(series.timestamps[i]))]
        + [repr(float(v)) for v in series.values[i]]
        + [int(series.labels[i])]
        for i in range(series.length)
    )
    _write_csv(path, header, rows)


def read_series_csv(path: Path) -> TimeSeries:
    header, rows = _read_csv(path)
    if len(header) < 3 or header[0] != "timestamp" or header[-1] != "label":
        raise DataError(f"{path}: expected columns timestamp,<channels...>,label")
    channels = tuple(header[1:-1])
    ts = [float(r[0]) for r in rows]
    values = [[float(v) for v in r[1:-1]] for r in rows]
    labels = [int(r[-1]) for r in rows]
    return TimeSeries(
        timestamps=np.asarray(ts),
        values=np.asarray(values),
        labels=np.asarray(labels, dtype=np.int64),
        channel_names=channels,
    )


def write_params_json(params: StandardizationParams, path: Path) -> None:
    write_json(
        path,
        {
            "means": [repr(float(v)) for v in params.means],
            "standard_deviations": [repr(float(v)) for v in params.standard_deviations],
            "mode": params.mode,
        },
    )


def read_params_json(path: Path) -> StandardizationParams:
    payload = read_json(path)
    return StandardizationParams(
        means=np.asarray([float(v) for v in payload["means"]]),
        standard_deviations=np.asarray([float(v) for v in payload["standard_deviations"]]),
        mode=payload["mode"],
    )


# --- windows ---------------------------------------------------------------

def write_windows_csv(
    windows_by_split: Mapping[str, Sequence[LabeledWindow]],
    channel_names: Sequence[str],
    path: Path,
) -> None:
    header = ["split", "window", "point", "label", "t_first", "t_last", *channel_names]
    rows = []
    for split in windows_by_split:
        for win in windows_by_split[split]:
            t0, t1 = win.time_range
            for p, point in enumerate(win.points):
                rows.append(
                    [split, win.index, p, win.label, repr(float(t0)), repr(float(t1))]
                    + [repr(float(v)) for v in point]
                )
    _write_csv(path, header, rows)


def read_windows_csv(path: Path) -> dict[str, list[LabeledWindow]]:
    header, rows = _read_csv(path)
    fixed = ["split", "window", "point", "label", "t_first", "t_last"]
    if header[: len(fixed)] != fixed:
        raise DataError(f"{path}: expected columns {fixed},<channels...>")
    grouped: dict[tuple[str, int], dict] = {}
    order: list[tuple[str, int]] = []
    for r in rows:
        key = (r[0], int(r[1]))
        if key not in grouped:
            grouped[key] = {
                "label": int(r[3]),
                "range": (float(r[4]), float(r[5])),
                "points": [],
            }
            order.append(key)
        grouped[key]["points"].append((int(r[2]), [float(v) for v in r[6:]]))
    out: dict[str, list[LabeledWindow]] = {}
    for split, index in order:
        entry = grouped[(split, index)]
        points = [p for _, p in sorted(entry["points"], key=lambda t: t[0])]
        out.setdefault(split, []).append(
            LabeledWindow(
                index=index,
                points=np.asarray(points, dtype=float),
                label=entry["label"],
                time_range=entry["range"],
            )
        )
    return out


def window_labels(windows_by_split: Mapping[str, Sequence[LabeledWindow]], split: str) -> list[int]:
    if split not in windows_by_split:
        raise DataError(f"no split named '{split}' in windows file (have {sorted(windows_by_split)})")
    return [w.label for w in windows_by_split[split]]


# --- clouds ----------------------------------------------------------------

def write_clouds_csv(clouds_by_split: Mapping[str, Sequence[AugmentedCloud]], path: Path) -> None:
    dims = {c.points.shape[1] for clouds in clouds_by_split.values() for c in clouds}
    d = dims.pop() if dims else 0
    header = ["split", "window", "point", *[f"x{i}" for i in range(d)]]
    rows = []
    for split in clouds_by_split:
        for cloud in clouds_by_split[split]:
            for p, point in enumerate(cloud.points):
                rows.append([split, cloud.source_window, p] + [repr(float(v)) for v in point])
    _write_csv(path, header, rows)


def read_clouds_csv(path: Path) -> dict[str, list[AugmentedCloud]]:
    header, rows = _read_csv(path)
    if header[:3] != ["split", "window", "point"]:
        raise DataError(f"{path}: expected columns split,window,point,<coords...>")
    grouped: dict[tuple[str, int], list] = {}
    order: list[tuple[str, int]] = []
    for r in rows:
        key = (r[0], int(r[1]))
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append((int(r[2]), [float(v) for v in r[3:]]))
    out: dict[str, list[AugmentedCloud]] = {}
    for split, index in order:
        points = [p for _, p in sorted(grouped[(split, index)], key=lambda t: t[0])]
        out.setdefault(split, []).append(
            AugmentedCloud(points=np.asarray(points, dtype=float), source_window=index)
        )
    return out


# --- diagrams ---------------------------------------------------------------

def write_diagrams_csv(
    diagrams_by_split: Mapping[str, Sequence[PersistenceDiagram]], path: Path
) -> None:
    header = ["split", "window", "dim", "birth", "death"]
    rows = []
    for split in diagrams_by_split:
        for index, diag in enumerate(diagrams_by_split[split]):
            for b, d in diag.pairs:
                rows.append([split, index, diag.dim, repr(b), repr(d)])
    _write_csv(path, header, rows)


def read_diagrams_csv(
    path: Path,
    counts: Mapping[str, int],
    dim: int,
    essential_policy: str,
) -> dict[str, list[PersistenceDiagram]]:
    """Rebuild per-window diagrams; windows absent from the file get empty
    diagrams, so ``counts`` (windows per split) is required."""
    header, rows = _read_csv(path)
    if header != ["split", "window", "dim", "birth", "death"]:
        raise DataError(f"{path}: expected columns split,window,dim,birth,death")
    pairs: dict[tuple[str, int], list[tuple[float, float]]] = {}
    for r in rows:
        row_dim = int(r[2])
        if row_dim != dim:
            continue
        pairs.setdefault((r[0], int(r[1])), []).append((float(r[3]), float(r[4])))
    out: dict[str, list[PersistenceDiagram]] = {}
    for split, count in counts.items():
        out[split] = [
            PersistenceDiagram(
                dim=dim,
                pairs=tuple(pairs.get((split, i), ())),
                essential_policy=essential_policy,
            )
            for i in range(count)
        ]
    return out


def diagram_set_hash(diagrams_by_split: Mapping[str, Sequence[PersistenceDiagram]]) -> str:
    lines = []
    for split in sorted(diagrams_by_split):
        for index, diag in enumerate(diagrams_by_split[split]):
            for b, d in diag.pairs:
                lines.append(f"{split}|{index}|{diag.dim}|{b!r}|{d!r}")
    return sha256_bytes("\n".join(lines).encode("utf-8"))


# --- distance matrix --------------------------------------------------------

def write_distmat_csv(matrix: DistanceMatrix, path: Path) -> None:
    header = ["window", *[str(c) for c in matrix.col_ids]]
    rows = (
        [str(rid)] + [repr(float(v)) for v in matrix.values[i]]
        for i, rid in enumerate(matrix.row_ids)
    )
    _write_csv(path, header, rows)


def read_distmat_csv(path: Path) -> DistanceMatrix:
    header, rows = _read_csv(path)
    if not header or header[0] != "window":
        raise DataError(f"{path}: expected first column 'window'")
    col_ids = tuple(int(c) for c in header[1:])
    row_ids = tuple(int(r[0]) for r in rows)
    values = np.asarray([[float(v) for v in r[1:]] for r in rows], dtype=float)
    return DistanceMatrix(row_ids=row_ids, col_ids=col_ids, values=values)


# --- evaluation report -------------------------------------------------------

def report_to_dict(report: EvaluationReport) -> dict:
    per_class = {
        str(label): {
            "precision": float(report.precision[label]),
            "recall": float(report.recall[label]),
            "f1": float(report.f1[label]),
        }
        for label in report.classes
    }
    return {
        "classes": list(report.classes),
        "confusion": [list(row) for row in report.confusion],
        "n_test": report.total,
        "accuracy": float(report.accuracy),
        "sensitivity": None if report.sensitivity is None else float(report.sensitivity),
        "specificity": None if report.specificity is None else float(report.specificity),
        "per_class": per_class,
    }


def write_report_json(report: EvaluationReport, path: Path) -> None:
    write_json(path, report_to_dict(report))


def read_report_json(path: Path) -> EvaluationReport:
    payload = read_json(path)
    # Metrics are recomputed from the confusion matrix, so they stay exact.
    return EvaluationReport.from_confusion(payload["classes"], payload["confusion"])
