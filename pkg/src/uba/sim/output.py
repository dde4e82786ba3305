"""Plot-ready result files.

CSV output writes ``regret.csv``, ``detection.csv`` and ``delay.csv`` (only
when termination is enabled), ``bounds.json`` and ``manifest.json``.  JSON
output writes one ``results.json`` that validates against
``uba/data/results.schema.json``.  Nothing time- or path-dependent is
written, so identical configs give byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from uba.bounds import BoundReport
from uba.sim.engine import ExperimentResult
from uba.sim.scenarios import resolve

SCHEMA_VERSION = "1.0"
REGRET_COLUMNS = ("t", "mean_regret", "stderr", "lower_bound_c_logt", "upper_bound_envelope")


def load_schema() -> dict:
    return json.loads(resources.files("uba").joinpath("data/results.schema.json").read_text())


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _config_dict(result: ExperimentResult) -> dict:
    d = result.config.to_dict()
    d["scenario"] = dataclasses.asdict(resolve(result.config.scenario))
    d.pop("output_dir", None)
    d.pop("workers", None)
    return d


def _regret_rows(result: ExperimentResult):
    c = result.curve
    lower = result.lower_bound_curve()
    upper = result.upper_bound_curve()
    for i in range(len(c.t)):
        yield (
            int(c.t[i]),
            float(c.mean_regret[i]),
            float(c.stderr[i]),
            None if lower is None else float(lower[i]),
            None if upper is None else float(upper[i]),
        )


def _detection_rows(result: ExperimentResult):
    det = result.detection
    counts = det.counts
    cdf = np.cumsum(det.frequencies)
    return [(j + 1, int(counts[j]), float(det.frequencies[j]), float(cdf[j])) for j in range(det.k)]


def _delay_rows(result: ExperimentResult):
    det = result.detection
    values, cdf = det.delay_cdf()
    _, counts = np.unique(det.terminated_delays, return_counts=True)
    return [(int(v), int(n), float(p)) for v, n, p in zip(values, counts, cdf)]


def _write_csv(path: Path, header, rows):
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    path.write_text(buf.getvalue())


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def results_document(result: ExperimentResult) -> dict:
    """Everything about one experiment as a JSON-ready dict."""
    regret = {name: [] for name in REGRET_COLUMNS}
    for row in _regret_rows(result):
        for name, v in zip(REGRET_COLUMNS, row):
            regret[name].append(v)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_dict(result),
        "profile": {
            "powers": [float(x) for x in result.profile.powers],
            "success_probs": [float(x) for x in result.profile.success_probs],
            "k_star": result.profile.k_star + 1,
        },
        "regret": regret,
        "mean_pulls": [float(x) for x in result.mean_pulls],
        "bounds": _bounds_dict(result),
        "detection": None,
        "notes": list(result.notes),
    }
    if result.detection is not None:
        det = result.detection
        doc["detection"] = {
            "runs": det.runs,
            "non_terminated": det.non_terminated,
            "horizon": det.horizon,
            "beams": [{"beam": b, "count": n, "frequency": f, "cdf": c} for b, n, f, c in _detection_rows(result)],
            "delays": [{"delay": d, "count": n, "cdf": c} for d, n, c in _delay_rows(result)],
        }
    return doc


def bounds_document(report: BoundReport, epsilon: float) -> dict:
    """Bound report with 1-based beam labels, as written to files."""
    b = report.to_dict()
    for key in ("c_theta", "c_prime_theta", "ub_constant"):
        b[key] = _num(b[key])
    b["k_star"] += 1
    b["filtered_neighbors"] = [j + 1 for j in b["filtered_neighbors"]]
    b["line_neighbors"] = [j + 1 for j in b["line_neighbors"]]
    b["epsilon"] = epsilon
    return b


def _bounds_dict(result: ExperimentResult) -> dict:
    return bounds_document(result.bounds, result.config.epsilon)


def emit_results(result: ExperimentResult, fmt: str, path) -> list:
    """Write result files into directory ``path``; returns the written paths."""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    if fmt == "json":
        target = out / "results.json"
        target.write_text(_dump(results_document(result)))
        return [target]
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")

    manifest = {"schema_version": SCHEMA_VERSION, "files": [], "notes": list(result.notes)}
    _write_csv(out / "regret.csv", REGRET_COLUMNS, _regret_rows(result))
    written.append(out / "regret.csv")
    if result.detection is not None:
        _write_csv(out / "detection.csv", ("beam", "count", "frequency", "cdf"), _detection_rows(result))
        _write_csv(out / "delay.csv", ("delay", "count", "cdf"), _delay_rows(result))
        written += [out / "detection.csv", out / "delay.csv"]
    else:
        manifest["notes"].append("detection.csv and delay.csv omitted")
    (out / "bounds.json").write_text(_dump(_bounds_dict(result)))
    written.append(out / "bounds.json")
    manifest["files"] = [p.name for p in written]
    manifest["config"] = _config_dict(result)
    (out / "manifest.json").write_text(_dump(manifest))
    written.append(out / "manifest.json")
    return written


def read_regret_csv(path) -> dict:
    """Parse a regret.csv back into float arrays (empty cells become NaN)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = {}
    for name in REGRET_COLUMNS:
        vals = [row[name] for row in rows]
        if name == "t":
            out[name] = np.array([int(v) for v in vals], dtype=np.int64)
        else:
            out[name] = np.array([float(v) if v != "" else np.nan for v in vals])
    return out
