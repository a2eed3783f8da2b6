#!/usr/bin/env python3
"""Fetch the UCI AReM activity-recognition dataset and normalize the
cycling and standing activities for topowin.

The archive holds one directory per activity with ~15 recording instances
each; every instance is a CSV of RSS summary readings taken every 250 ms
(columns avg_rss12, var_rss12, avg_rss13, var_rss13, avg_rss23, var_rss23,
preceded by comment lines).  This script interleaves standing (class 0)
and cycling (class 1) instances, truncates each instance to a multiple of
the window length so no window straddles a recording boundary, re-indexes
time globally (per-instance clocks restart at zero), and splits the
resulting windows 60:20:20 into train/validation/test.

The original publication describes its row selection only at the class
level; the interleaving order used here is a reconstruction, so accuracies
are expected to land near, not exactly on, the reported figures.

Raw data is cached under data/raw/ and never committed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = (
    "https://archive.ics.uci.edu/static/public/366/"
    "activity+recognition+system+based+on+multisensor+data+fusion+arem.zip"
)
FEATURES = ["avg_rss12", "var_rss12", "avg_rss13", "var_rss13", "avg_rss23", "var_rss23"]
WINDOW = 5
ACTIVITIES = {"standing": 0, "cycling": 1}


def parse_instance(text: str) -> list[list[float]]:
    """Feature rows of one recording instance; comment lines skipped and the
    per-instance time column dropped."""
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in re.split(r"[,;\s]+", line) if p]
        if len(parts) < len(FEATURES) + 1:
            continue
        try:
            values = [float(p) for p in parts[1 : len(FEATURES) + 1]]
        except ValueError:
            continue
        rows.append(values)
    return rows


def _instance_sort_key(name: str) -> tuple:
    digits = re.findall(r"(\d+)", Path(name).stem)
    return (int(digits[-1]) if digits else 0, name)


def collect_instances(zf: zipfile.ZipFile) -> dict[str, list[list[list[float]]]]:
    """Per activity, the parsed instances in dataset-number order, each
    truncated to a whole number of windows."""
    out: dict[str, list] = {name: [] for name in ACTIVITIES}
    for activity in ACTIVITIES:
        members = [
            n
            for n in zf.namelist()
            if f"/{activity}/" in f"/{n.lower()}" or n.lower().startswith(f"{activity}/")
        ]
        members = [n for n in members if n.lower().endswith(".csv")]
        for name in sorted(members, key=_instance_sort_key):
            rows = parse_instance(zf.read(name).decode("utf-8", errors="replace"))
            usable = len(rows) // WINDOW * WINDOW
            if usable:
                out[activity].append(rows[:usable])
    return out


def interleave(instances: dict[str, list]) -> tuple[list[list[float]], list[int]]:
    """Alternate standing and cycling instances; leftovers appended.
    Returns (feature rows, per-row labels)."""
    series: list[list[float]] = []
    labels: list[int] = []
    queues = {name: list(instances[name]) for name in ACTIVITIES}
    order = sorted(ACTIVITIES, key=ACTIVITIES.get)  # class 0 first
    while any(queues.values()):
        for name in order:
            if queues[name]:
                block = queues[name].pop(0)
                series.extend(block)
                labels.extend([ACTIVITIES[name]] * len(block))
    return series, labels


def split_boundaries(total_rows: int) -> dict[str, list[int]]:
    windows = total_rows // WINDOW
    train_w = int(windows * 0.6)
    val_w = int(windows * 0.2)
    a = train_w * WINDOW
    b = a + val_w * WINDOW
    c = windows * WINDOW
    return {"train": [0, a], "validation": [a, b], "test": [b, c]}


def build_config(run_id: str, test_split: str, boundaries: dict, k: int = 40) -> dict:
    return {
        "run_id": run_id,
        "data": "data/arem.csv",
        "schema": {"timestamp": "t", "features": FEATURES, "label": "label"},
        "splits": [[name, *boundaries[name]] for name in ("train", "validation", "test")],
        "window": WINDOW,
        "stride": WINDOW,
        "label_rule": "majority",
        "standardize": "fit_on_combined",
        "offset": "auto",
        "anchors": "origin",
        "dimension": 0,
        "essential_policy": "dropped",
        "p": 1.0,
        "k": k,
        "train_split": "train",
        "test_split": test_split,
        "seed": 0,
    }


def write_outputs(series: list, labels: list, root: Path) -> None:
    data_dir = root / "data"
    cfg_dir = root / "configs"
    data_dir.mkdir(parents=True, exist_ok=True)
    cfg_dir.mkdir(parents=True, exist_ok=True)
    data_path = data_dir / "arem.csv"
    with data_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", *FEATURES, "label"])
        for t, (row, label) in enumerate(zip(series, labels)):
            writer.writerow([t] + [repr(v) for v in row] + [label])

    boundaries = split_boundaries(len(series))
    for name, cfg in (
        ("arem_validation.json", build_config("arem-validation", "validation", boundaries)),
        ("arem_test.json", build_config("arem-test", "test", boundaries)),
    ):
        (cfg_dir / name).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n", "utf-8")
    windows = {name: (b - a) // WINDOW for name, (a, b) in boundaries.items()}
    print(f"wrote {data_path} ({len(series)} rows; windows per split: {windows})")
    print(f"wrote {cfg_dir / 'arem_validation.json'} and {cfg_dir / 'arem_test.json'}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--source", type=Path, help="local copy of the UCI zip (skips download)")
    parser.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    args = parser.parse_args(argv)

    raw_dir = args.root / "data" / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)
    zip_path = args.source if args.source else raw_dir / "arem.zip"
    if not zip_path.exists():
        print(f"downloading {URL}")
        urllib.request.urlretrieve(URL, zip_path)
    with zipfile.ZipFile(zip_path) as zf:
        instances = collect_instances(zf)
    missing = [name for name, blocks in instances.items() if not blocks]
    if missing:
        print(f"archive has no usable instances for: {missing}", file=sys.stderr)
        return 1
    counts = {name: len(blocks) for name, blocks in instances.items()}
    print(f"instances: {counts}")
    series, labels = interleave(instances)
    write_outputs(series, labels, args.root)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
