"""CSV and JSON serialization of risk reports and sweep tables.

CSV files are comma-separated with ``.`` decimals; reals are written in
scientific notation with 17 significant digits. The first header cell names
the schema and its version, and the column order below is fixed for a given
schema version.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

from . import __version__
from .experiments import RiskReport, SweepResult, RemainderVerdict

RISK_SCHEMA = "ewagg-risk-v1"
SWEEP_SCHEMA = "ewagg-sweep-v1"

RISK_COLUMNS = (
    "name", "library_version", "n", "sigma", "beta", "replications", "seed", "mu_kind",
    "family_kind", "family_size", "oracle_risk", "oracle_index", "ratio",
    "mc_risk_ew", "se_ew", "mc_risk_ure", "se_ure", "remainder_ew", "remainder_ure",
    "weighted_ure_mean", "weighted_ure_se", "weighted_ure_gap", "weighted_ure_gap_se",
    "stein_gap", "stein_gap_se", "bound_log", "bound_sqrt_shape", "psi_c",
    "oracle_min_rhs", "k_lower", "k_upper", "theory_applicable", "passed", "scenario_json",
)

SWEEP_COLUMNS = (
    "scale", "ratio", "oracle_risk", "mc_risk_ew", "se_ew", "mc_risk_ure", "se_ure",
    "remainder_ew", "remainder_ure", "bound_log", "bound_sqrt_shape", "bound_ratio",
    "library_version", "scenario_json",
)


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.16e}"
    return str(value)


def _scenario_json(scenario: dict) -> str:
    return json.dumps(scenario, sort_keys=True, separators=(",", ":"))


def risk_row(report: RiskReport) -> list[str]:
    s = report.scenario
    values = {
        "name": s["name"],
        "library_version": report.version,
        "n": s["n"],
        "sigma": float(s["sigma"]),
        "beta": float(s["beta"]),
        "replications": s["replications"],
        "seed": s["seed"],
        "mu_kind": s["mu"]["kind"],
        "family_kind": s["family"]["kind"],
        "family_size": report.family_size,
        "oracle_risk": report.oracle_risk,
        "oracle_index": report.oracle_index,
        "ratio": report.ratio,
        "mc_risk_ew": report.mc_risk_ew[0],
        "se_ew": report.mc_risk_ew[1],
        "mc_risk_ure": report.mc_risk_ure[0],
        "se_ure": report.mc_risk_ure[1],
        "remainder_ew": report.remainder_ew,
        "remainder_ure": report.remainder_ure,
        "weighted_ure_mean": report.weighted_ure_mean[0],
        "weighted_ure_se": report.weighted_ure_mean[1],
        "weighted_ure_gap": report.weighted_ure_gap[0],
        "weighted_ure_gap_se": report.weighted_ure_gap[1],
        "stein_gap": report.stein_gap[0],
        "stein_gap_se": report.stein_gap[1],
        "bound_log": report.bound_log,
        "bound_sqrt_shape": report.bound_sqrt_shape,
        "psi_c": report.psi_c,
        "oracle_min_rhs": report.oracle_min_rhs,
        "k_lower": report.k_lower,
        "k_upper": report.k_upper,
        "theory_applicable": report.theory_applicable,
        "passed": report.passed,
        "scenario_json": _scenario_json(s),
    }
    return [RISK_SCHEMA] + [fmt(values[c]) for c in RISK_COLUMNS]


def _csv_text(header: tuple[str, ...], schema: str, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"schema={schema}", *header])
    writer.writerows(rows)
    return buf.getvalue()


def risk_csv(reports) -> str:
    return _csv_text(RISK_COLUMNS, RISK_SCHEMA, [risk_row(r) for r in reports])


def risk_json(report: RiskReport) -> str:
    payload = {"schema": RISK_SCHEMA, **report.to_dict()}
    return json.dumps(payload, indent=2) + "\n"


def sweep_csv(sweep: SweepResult) -> str:
    scenario = _scenario_json(sweep.base)
    rows = []
    for r in sweep.rows:
        values = {**vars(r), "bound_ratio": r.bound_log / r.bound_sqrt_shape,
                  "library_version": __version__, "scenario_json": scenario}
        rows.append([SWEEP_SCHEMA] + [fmt(values[c]) for c in SWEEP_COLUMNS])
    return _csv_text(SWEEP_COLUMNS, SWEEP_SCHEMA, rows)


def sweep_json(sweep: SweepResult, verdict: RemainderVerdict | None = None) -> str:
    payload = {
        "schema": SWEEP_SCHEMA,
        "version": __version__,
        "scenario": sweep.base,
        "k_lower": sweep.k_lower,
        "k_upper": sweep.k_upper,
        "condition_satisfied": sweep.condition_satisfied,
        "rows": [vars(r) for r in sweep.rows],
    }
    if verdict is not None:
        payload["remainder_bound"] = {
            "passed": verdict.passed,
            "c_star": verdict.c_star,
            "normalized_remainder": verdict.normalized,
            "spearman": verdict.spearman,
            "bound_ratio_last": verdict.bound_ratio_last,
            "crossover_ratio": verdict.crossover,
            "verdicts": [v.to_dict() for v in verdict.verdicts],
        }
    return json.dumps(payload, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
