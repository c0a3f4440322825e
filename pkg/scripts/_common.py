"""Small helpers shared by the experiment scripts."""
import csv
import json
from pathlib import Path


def out_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2), encoding="utf-8")
