"""JSON / CSV output for experiment reports."""

import csv
import json
import math
from pathlib import Path

import numpy as np

SIGNIFICANT_DIGITS = 12


def _round(x):
    if not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def clean(obj):
    """Convert numpy types and round floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    return obj


def contract(name, value, limit, passed):
    return {"name": name, "value": value, "limit": limit, "passed": bool(passed)}


def make_report(experiment, seed, config, results, contracts, files=()):
    return clean({
        "schema": 1,
        "experiment": experiment,
        "seed": seed,
        "config": config,
        "results": results,
        "contracts": contracts,
        "files": list(files),
        "passed": all(c["passed"] for c in contracts),
    })


def write_json(path, report):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")
    return path


def write_csv(path, header, rows):
    """RFC-4180 CSV (CRLF line endings, minimal quoting)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.{SIGNIFICANT_DIGITS}g}" if isinstance(v, float) else v for v in row])
    return path
