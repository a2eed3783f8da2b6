#!/usr/bin/env python3
"""Generate a small synthetic two-class dataset and a matching run config.

Useful for trying the CLI offline: alternating windows of tight noise
(class 0) and wide noise (class 1) are trivially separable, so a correct
installation reports accuracy near 1.0.
"""

from __future__ import annotations

import argparse
import csv
import json
from pathlib import Path

import numpy as np


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    parser.add_argument("--windows", type=int, default=100)
    parser.add_argument("--window-length", type=int, default=10)
    parser.add_argument("--channels", type=int, default=3)
    parser.add_argument("--seed", type=int, default=20240803)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    w, d = args.window_length, args.channels
    data_dir = args.root / "data"
    cfg_dir = args.root / "configs"
    data_dir.mkdir(parents=True, exist_ok=True)
    cfg_dir.mkdir(parents=True, exist_ok=True)

    data_path = data_dir / "synthetic.csv"
    with data_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", *[f"f{i}" for i in range(d)], "label"])
        t = 0
        for block in range(args.windows):
            label = block % 2
            sigma = 2.0 if label else 0.1
            for row in rng.normal(0.0, sigma, size=(w, d)):
                writer.writerow([t] + [repr(float(v)) for v in row] + [label])
                t += 1

    train_rows = (args.windows * 6 // 10) * w
    total_rows = args.windows * w
    config = {
        "run_id": "synthetic",
        "data": "data/synthetic.csv",
        "schema": {
            "timestamp": "timestamp",
            "features": [f"f{i}" for i in range(d)],
            "label": "label",
        },
        "splits": [["train", 0, train_rows], ["test", train_rows, total_rows]],
        "window": w,
        "stride": w,
        "label_rule": "majority",
        "standardize": "fit_on_combined",
        "offset": "auto",
        "anchors": "origin",
        "dimension": 0,
        "essential_policy": "dropped",
        "p": 1.0,
        "k": 5,
        "seed": args.seed,
    }
    cfg_path = cfg_dir / "synthetic.json"
    cfg_path.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {data_path} ({total_rows} rows) and {cfg_path}")
    print("try: topowin run --config configs/synthetic.json")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
