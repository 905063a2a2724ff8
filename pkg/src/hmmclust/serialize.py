"""File formats: JSON for parameters/partitions/reports, CSV for sequences.

Everything round-trips through plain stdlib json/csv.  Gaussian components in
parameter files are written as (weight, mean, scale) with the scale read as a
standard deviation by default; pass gaussian_second_param="variance" when a
source uses the other convention.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .model import Finite, GaussianMixture, Histogram, HmmParams
from .partitions import Partition
from .spectral import GriddedDensity

FLOAT_DIGITS = 12


def fmt(v):
    """Floating-point text at a fixed 12 significant digits, so identical
    runs produce byte-identical files across platforms."""
    return f"{float(v):.{FLOAT_DIGITS}g}"


def round_floats(obj):
    """Recursively round floats in a JSON-ready structure to 12 significant
    digits (lists/dicts/scalars)."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return round_floats(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(fmt(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _emission_to_dict(e):
    if isinstance(e, Finite):
        return {"kind": "finite", "pmf": list(e.pmf)}
    if isinstance(e, GaussianMixture):
        return {"kind": "gaussian_mixture",
                "components": [list(c) for c in e.components]}
    if isinstance(e, Histogram):
        return {"kind": "histogram", "a": e.a, "b": e.b,
                "heights": list(e.heights)}
    if isinstance(e, GriddedDensity):
        return {"kind": "gridded", "grid": list(e.grid),
                "values": list(e.values), "floor": e.floor}
    raise TypeError(f"cannot serialize emission of type {type(e).__name__}")


def _emission_from_dict(d, gaussian_second_param="stddev"):
    kind = d["kind"]
    if kind == "finite":
        return Finite(pmf=tuple(d["pmf"]))
    if kind == "gaussian_mixture":
        comps = []
        for w, m, s in d["components"]:
            if gaussian_second_param == "variance":
                s = math.sqrt(s)
            comps.append((float(w), float(m), float(s)))
        return GaussianMixture(components=tuple(comps))
    if kind == "histogram":
        return Histogram(a=float(d["a"]), b=float(d["b"]),
                         heights=tuple(d["heights"]))
    if kind == "gridded":
        return GriddedDensity(grid=tuple(d["grid"]), values=tuple(d["values"]),
                              floor=float(d.get("floor", 0.0)))
    raise ValueError(f"unknown emission kind {kind!r}")


def params_to_json(params, path=None):
    """HmmParams as a JSON document (returned as str when path is None)."""
    doc = {"nu": params.nu.tolist(), "Q": params.Q.tolist(),
           "emissions": [_emission_to_dict(e) for e in params.emissions]}
    text = json.dumps(doc, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def params_from_json(source, gaussian_second_param="stddev"):
    """Read HmmParams from a JSON string or file path."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    emissions = tuple(_emission_from_dict(d, gaussian_second_param)
                      for d in doc["emissions"])
    return HmmParams(nu=np.asarray(doc["nu"], dtype=float),
                     Q=np.asarray(doc["Q"], dtype=float), emissions=emissions)


def trajectory_to_csv(traj, path):
    """Columns i, x, y; hidden states included so runs are replayable."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "x", "y"])
        for i, (x, y) in enumerate(zip(traj.x, traj.y), start=1):
            w.writerow([i, int(x), fmt(y)])


def trajectory_from_csv(path):
    """Returns (x, y) arrays from an i,x,y file."""
    xs, ys = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            xs.append(int(row["x"]))
            ys.append(float(row["y"]))
    return np.array(xs), np.array(ys)


def posterior_to_csv(probs, path):
    """Columns i, p1..pJ of smoothing probabilities."""
    probs = np.asarray(probs)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i"] + [f"p{j + 1}" for j in range(probs.shape[1])])
        for i, row in enumerate(probs, start=1):
            w.writerow([i] + [fmt(v) for v in row])


def partition_to_json(partition, path=None):
    """1-based list-of-lists."""
    text = json.dumps([list(b) for b in partition.blocks])
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def partition_from_json(source):
    if isinstance(source, str) and source.lstrip().startswith("["):
        blocks = json.loads(source)
    else:
        with open(source) as fh:
            blocks = json.load(fh)
    return Partition(blocks=tuple(tuple(int(i) for i in b) for b in blocks))


def bound_report_to_json(report, path=None):
    """Flat JSON; every field keeps its formula provenance string."""
    text = json.dumps(round_floats(report), indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def densities_to_csv(grid, values, path):
    """Columns x, f1..fJ of density values on a grid."""
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x"] + [f"f{j + 1}" for j in range(values.shape[1])])
        for x, row in zip(grid, values):
            w.writerow([fmt(x)] + [fmt(v) for v in row])


def results_to_csv(rows, path):
    """Result-table rows (dicts) with a stable column order."""
    if not rows:
        raise ValueError("no result rows to write")
    cols = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v
                        for v in (row[c] for c in cols)])
