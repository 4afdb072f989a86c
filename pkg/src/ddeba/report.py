"""JSON and aligned-text rendering of predictions and evaluation reports.

JSON reports are deterministic apart from ``manifest.timestamp`` and the
``timing`` block.
"""

from __future__ import annotations

import datetime as dt
import json
import math

import numpy as np

from .bundled import MEASURES
from .estimator import Prediction
from .evaluation import Comparison, ComparisonResult, EvaluationReport

VOLATILE_KEYS = ("timing",)


def manifest(**fields) -> dict:
    out = dict(fields)
    out["timestamp"] = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
    return out


def _num(x):
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def _floats(arr) -> list:
    return [_num(v) for v in np.asarray(arr, dtype=np.float64)]


def prediction_dict(pred: Prediction, dataset_efforts=None) -> dict:
    out = {
        "estimate": pred.estimate,
        "k_used": pred.k_used,
        "method": pred.method,
        "neighbor_indices": list(pred.neighbor_indices),
        "matched_index": pred.matched_index,
        "ks_statistic": pred.ks_statistic,
        "k_errors": list(pred.k_errors),
    }
    if dataset_efforts is not None:
        out["neighbor_efforts"] = [float(dataset_efforts[i]) for i in pred.neighbor_indices]
    return out


def evaluation_dict(report: EvaluationReport) -> dict:
    loc = report.locals
    projects = []
    for i in range(report.n):
        projects.append({
            "index": i,
            "actual": _num(loc.actual[i]),
            "estimate": _num(loc.estimate[i]),
            "mre": _num(loc.mre[i]),
            "mer": _num(loc.mer[i]),
            "ae": _num(loc.ae[i]),
            "k_used": report.k_used[i],
            "matched_index": report.matched_index[i],
        })
    cfg = report.config
    return {
        "config": {"method": cfg.method, "k": cfg.k, "k_max": cfg.k_max,
                   "statistic": cfg.statistic},
        "n": report.n,
        "global": report.globals.as_dict(),
        "undefined": {"mre": loc.undefined_mre, "mer": loc.undefined_mer,
                      "failed_predictions": len(report.failures)},
        "failures": {str(k): v for k, v in sorted(report.failures.items())},
        "projects": projects,
        "op_counts": report.op_counts.as_dict(),
    }


def wilcoxon_dict(result: ComparisonResult) -> dict:
    return {
        "statistic": result.wilcoxon_statistic,
        "p_value": result.p_value,
        "n_effective": result.n_effective,
        "method": result.method,
        "degenerate": result.degenerate,
    }


def comparison_dict(comp: Comparison, reference: dict | None = None,
                    reference_p: float | None = None) -> dict:
    out = {
        "loocv": evaluation_dict(comp.loocv),
        "dd": evaluation_dict(comp.dd),
        "wilcoxon": wilcoxon_dict(comp.wilcoxon),
    }
    if reference:
        out["published_reference"] = {"global": reference, "p_value": reference_p}
    return out


def timing_block(**wall_times: float) -> dict:
    return {f"{k}_wall_time_ms": round(v * 1000.0, 3) for k, v in wall_times.items()}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def strip_volatile(doc: dict) -> dict:
    """Copy of ``doc`` without the timestamp and timing fields."""
    doc = json.loads(json.dumps(doc))
    for key in VOLATILE_KEYS:
        doc.pop(key, None)
    doc.get("manifest", {}).pop("timestamp", None)
    return doc


# ---------------------------------------------------------------------------
# text

def _fmt(x) -> str:
    if x is None:
        return "-"
    x = float(x)
    if math.isnan(x):
        return "-"
    return f"{x:.4f}" if abs(x) < 100 else f"{x:.1f}"


def prediction_text(pred: Prediction, efforts=None) -> str:
    lines = [
        f"method          {pred.method}",
        f"estimate        {pred.estimate:.6g}",
        f"k_used          {pred.k_used}",
        f"neighbors       {', '.join(str(i) for i in pred.neighbor_indices)}",
    ]
    if efforts is not None:
        lines.append(
            f"neighbor effort {', '.join(f'{efforts[i]:.6g}' for i in pred.neighbor_indices)}"
        )
    if pred.matched_index is not None:
        lines.append(f"matched_index   {pred.matched_index}")
        lines.append(f"ks_statistic    {pred.ks_statistic:.6g}")
    return "\n".join(lines) + "\n"


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) if c == 0 else cell.rjust(w) for c, (cell, w) in
                  enumerate(zip(r, widths)))
        for r in rows
    ) + "\n"


def evaluation_text(report: EvaluationReport) -> str:
    g = report.globals.as_dict()
    rows = [["method", *MEASURES], [report.config.method, *(_fmt(g[m]) for m in MEASURES)]]
    out = _table(rows)
    out += f"projects {report.n}, failed {len(report.failures)}, "
    out += f"ops {report.op_counts.total}, wall {report.wall_time * 1000:.1f} ms\n"
    return out


def comparison_text(comp: Comparison, name: str = "dataset", reference: dict | None = None,
                    reference_p: float | None = None) -> str:
    header = ["", "", *MEASURES, "Sig."]
    rows = [header]
    p = f"{comp.wilcoxon.p_value:.4f}"
    for label, rep in (("LOOCV-EbA", comp.loocv), ("DD-EbA", comp.dd)):
        g = rep.globals.as_dict()
        rows.append([name if label == "LOOCV-EbA" else "", label,
                     *(_fmt(g[m]) for m in MEASURES), p if label == "LOOCV-EbA" else ""])
    if reference:
        ref_p = "" if reference_p is None else f"{reference_p:.2f}"
        for key, label in (("loocv", "LOOCV-EbA (published)"), ("dd", "DD-EbA (published)")):
            rows.append(["", label, *(_fmt(reference[key][m]) for m in MEASURES),
                         ref_p if key == "loocv" else ""])
    out = _table(rows)
    for label, rep in (("loocv", comp.loocv), ("dd", comp.dd)):
        out += (f"{label:<6} ops {rep.op_counts.total:>10}  "
                f"wall {rep.wall_time * 1000:9.1f} ms  failed {len(rep.failures)}\n")
    return out
