"""Hill operator spectral toolkit; the public API is re-exported here."""
from __future__ import annotations

from .config import ROOT, VERSION, RunConfig, worker_count
from .errors import DomainError, HillSpectraError, VerificationError
from .models import GapTable, SpectrumTable
from .potential import FourierPotential, cosine_series, from_coefficients, ingest_grid, load_potential
from .integrators import INTEGRATORS, Integrator
from .floquet import compute_spectrum, discriminant, gap_table, integrate_floquet
from .galerkin import assemble, eigen, edge_coefficients, spectrum_table
from .asymptotics import asymptotic_report, corrections, predict_pair, recover_c0, recover_l2norm
from .decay import classify, theorem1_harness, theorem2_harness
from .report_builder import build_summary
from .cli import main, run

__all__ = [
    "ROOT",
    "VERSION",
    "RunConfig",
    "worker_count",
    "HillSpectraError",
    "DomainError",
    "VerificationError",
    "FourierPotential",
    "cosine_series",
    "from_coefficients",
    "ingest_grid",
    "load_potential",
    "Integrator",
    "INTEGRATORS",
    "integrate_floquet",
    "discriminant",
    "compute_spectrum",
    "gap_table",
    "SpectrumTable",
    "GapTable",
    "assemble",
    "eigen",
    "edge_coefficients",
    "spectrum_table",
    "corrections",
    "predict_pair",
    "asymptotic_report",
    "recover_c0",
    "recover_l2norm",
    "classify",
    "theorem1_harness",
    "theorem2_harness",
    "build_summary",
    "run",
    "main",
]
