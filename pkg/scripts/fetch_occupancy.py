#!/usr/bin/env python3
"""Fetch the UCI occupancy-detection dataset and normalize it for topowin.

Downloads the archive (or reads a local copy via --source), concatenates
the three recording periods in chronological order into a single CSV, and
writes two run configs: one for the test period after the training period,
one for the test period before it.

Row selection reconstructs the published protocol at the documented sizes
(800 training windows, 200 windows per test set, window length 10): the
first 8000 rows of the training period, the last 2000 rows of the earlier
test period, and the first 2000 rows of the later test period.  The exact
rows used originally are not published, so downstream accuracy is expected
to land in a band around the reported figures rather than match exactly.

Raw data is cached under data/raw/ and never committed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://archive.ics.uci.edu/static/public/357/occupancy+detection.zip"
MEMBERS = ("datatraining.txt", "datatest.txt", "datatest2.txt")
COLUMNS = ["date", "Temperature", "Humidity", "Light", "CO2", "HumidityRatio", "Occupancy"]
WINDOW = 10
TRAIN_ROWS = 8000
TEST_ROWS = 2000


def parse_block(text: str) -> list[list[str]]:
    """Rows [date, 5 features, label]; tolerates the leading index column."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    header = [h.strip().strip('"') for h in header]
    offset = 1 if len(header) == len(COLUMNS) + 1 or header[0] in ("", "id") else 0
    rows = []
    for record in reader:
        if not record:
            continue
        if len(record) == len(COLUMNS) + 1:
            record = record[1:]
        elif offset and len(record) > len(COLUMNS):
            record = record[offset:]
        if len(record) != len(COLUMNS):
            raise ValueError(f"unexpected row width {len(record)}: {record!r}")
        rows.append([record[0].strip().strip('"')] + [c.strip() for c in record[1:]])
    if not rows:
        raise ValueError("block has no data rows")
    return rows


def assemble(training: list, test_a: list, test_b: list) -> tuple[list, dict]:
    """Chronological concatenation plus split boundaries.

    Blocks are ordered by their first timestamp; the block before the
    training period becomes past-test rows, the one after becomes
    future-test rows.
    """
    blocks = sorted(
        [("train", training), ("a", test_a), ("b", test_b)], key=lambda item: item[1][0][0]
    )
    names = [name for name, _ in blocks]
    if names[1] != "train":
        raise ValueError(
            f"training period is not between the two test periods (order {names}); "
            "refusing to guess the protocol layout"
        )
    before = blocks[0][1]
    middle = blocks[1][1]
    after = blocks[2][1]
    train_rows = min(TRAIN_ROWS, len(middle) // WINDOW * WINDOW)
    test_rows_before = min(TEST_ROWS, len(before) // WINDOW * WINDOW)
    test_rows_after = min(TEST_ROWS, len(after) // WINDOW * WINDOW)
    combined = before + middle + after
    n_before = len(before)
    n_middle = len(middle)
    boundaries = {
        "test_before": [n_before - test_rows_before, n_before],
        "train": [n_before, n_before + train_rows],
        "test_after": [n_before + n_middle, n_before + n_middle + test_rows_after],
    }
    return combined, boundaries


def build_config(run_id: str, data_path: str, splits: list, k: int = 50) -> dict:
    return {
        "run_id": run_id,
        "data": data_path,
        "schema": {
            "timestamp": "date",
            "features": ["Temperature", "Humidity", "Light", "CO2", "HumidityRatio"],
            "label": "Occupancy",
        },
        "splits": splits,
        "window": WINDOW,
        "stride": WINDOW,
        "label_rule": "any_positive",
        "standardize": "fit_on_combined",
        "offset": "auto",
        "anchors": "origin",
        "dimension": 0,
        "essential_policy": "dropped",
        "p": 1.0,
        "k": k,
        "train_split": "train",
        "test_split": "test",
        "seed": 0,
    }


def write_outputs(combined: list, boundaries: dict, root: Path) -> None:
    data_dir = root / "data"
    cfg_dir = root / "configs"
    data_dir.mkdir(parents=True, exist_ok=True)
    cfg_dir.mkdir(parents=True, exist_ok=True)
    data_path = data_dir / "occupancy.csv"
    with data_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(combined)

    rel = "data/occupancy.csv"
    train = ["train", *boundaries["train"]]
    cfg1 = build_config(
        "occupancy-test1", rel, [train, ["test", *boundaries["test_after"]]]
    )
    cfg2 = build_config(
        "occupancy-test2", rel, [["test", *boundaries["test_before"]], train]
    )
    for name, cfg in (("occupancy_test1.json", cfg1), ("occupancy_test2.json", cfg2)):
        (cfg_dir / name).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {data_path} ({len(combined)} rows)")
    print(f"splits: {boundaries}")
    print(f"wrote {cfg_dir / 'occupancy_test1.json'} and {cfg_dir / 'occupancy_test2.json'}")


def validate(root: Path) -> None:
    try:
        from topowin import CsvSchema, load_csv
    except ImportError:
        print("topowin not importable; skipping validation", file=sys.stderr)
        return
    schema = CsvSchema(
        timestamp="date",
        features=("Temperature", "Humidity", "Light", "CO2", "HumidityRatio"),
        label="Occupancy",
    )
    series = load_csv(root / "data" / "occupancy.csv", schema)
    print(f"validated: {series.length} rows, d={series.dimension}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--source", type=Path, help="local copy of the UCI zip (skips download)")
    parser.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    args = parser.parse_args(argv)

    raw_dir = args.root / "data" / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)
    zip_path = args.source if args.source else raw_dir / "occupancy.zip"
    if not zip_path.exists():
        print(f"downloading {URL}")
        urllib.request.urlretrieve(URL, zip_path)
    with zipfile.ZipFile(zip_path) as zf:
        texts = {}
        for member in MEMBERS:
            matches = [n for n in zf.namelist() if n.endswith(member)]
            if not matches:
                print(f"archive is missing {member}", file=sys.stderr)
                return 1
            texts[member] = zf.read(matches[0]).decode("utf-8")
    combined, boundaries = assemble(
        parse_block(texts["datatraining.txt"]),
        parse_block(texts["datatest.txt"]),
        parse_block(texts["datatest2.txt"]),
    )
    write_outputs(combined, boundaries, args.root)
    validate(args.root)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
