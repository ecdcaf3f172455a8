"""CSV and JSON writers.

Every file opens with (or carries) the config digest and package version.
No timestamps are written, so an identical config reproduces identical
bytes.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from hill_spectra.config import VERSION, RunConfig
from hill_spectra.models import (
    AsymptoticReport,
    EigenpairSet,
    GapTable,
    ImplicationReport,
    SpectrumTable,
    UniquenessReport,
)
from hill_spectra.parity import ANTIPERIODIC, PERIODIC
from hill_spectra.potential import FourierPotential

FLOAT_FORMAT = ".17g"

SPECTRUM_HEADER = ("kind", "index", "lambda", "residual")
GAPS_HEADER = ("n", "left", "right", "length")
COEFFS_HEADER = ("n", "re", "im", "abs")
EIGEN_HEADER = ("index", "lambda", "residual")
ASYM_HEADER = (
    "m", "lambda1", "lambda2", "center_pred", "split_pred", "gap_meas",
    "resid_center", "resid_gap", "m2_resid_center", "budget",
)


def provenance(config: RunConfig) -> dict:
    return {"package": "hill_spectra", "version": VERSION, "config_sha256": config.digest()}


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _plain(value):
    """JSON-ready copy: dataclasses to dicts, numpy to Python, non-finite floats to null."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, Path):
        return str(value)
    return value


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence], config: RunConfig) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"# hill_spectra {VERSION} config_sha256={config.digest()}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_cell(v) for v in row] for row in rows)
    return path


def write_json(path: str | Path, payload: dict, config: RunConfig) -> Path:
    path = Path(path)
    data = {"provenance": provenance(config), **_plain(payload)}
    path.write_text(json.dumps(data, indent=4, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")
    return path


def spectrum_rows(table: SpectrumTable) -> list[tuple]:
    rows = []
    for parity in (PERIODIC, ANTIPERIODIC):
        for i, (lam, res) in enumerate(zip(table.eigenvalues(parity), table.residuals(parity))):
            rows.append((parity, i, float(lam), float(res)))
    return rows


def gap_rows(gaps: GapTable) -> list[tuple]:
    return [(e.n, e.left, e.right, e.length) for e in gaps]


def coeff_rows(q: FourierPotential, n_max: int | None = None) -> list[tuple]:
    top = q.degree if n_max is None else n_max
    cs = q.coefficients(np.arange(top + 1))
    return [(n, c.real, c.imag, abs(c)) for n, c in enumerate(cs)]


def eigen_rows(pairs: EigenpairSet) -> list[tuple]:
    return [(i, float(v), float(r)) for i, (v, r) in enumerate(zip(pairs.eigenvalues, pairs.residuals))]


def asym_rows(report: AsymptoticReport) -> list[tuple]:
    return [tuple(getattr(row, name) for name in ASYM_HEADER) for row in report.rows]


def implication_payload(report: ImplicationReport) -> dict:
    return {
        "harness": "thm1",
        "source": report.source,
        "n_min": report.n_min,
        "n_max": report.n_max,
        "gaps": report.gaps,
        "coefficients": report.coeffs,
        "implication": report.implication,
        "implication_big_o": report.implication_big_o,
        "ratio_ok": report.ratio_ok,
        "ratios": report.ratios,
    }


def uniqueness_payload(report: UniquenessReport) -> dict:
    return {
        "harness": "thm2",
        "source": report.source,
        "n0": report.n0,
        "eps": report.eps,
        "gap_hypothesis": report.gap_hypothesis,
        "worst_scaled_gap": report.worst_scaled_gap,
        "membership_holds": report.membership_holds,
        "membership": report.membership,
        "c0": report.c0,
        "l2norm": report.l2norm,
        "conclusion": report.conclusion,
    }
