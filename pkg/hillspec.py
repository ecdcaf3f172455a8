#!/usr/bin/env python3
"""Command-line entry point for the Hill operator spectral toolkit.

    python hillspec.py spectrum --potential zero.cfg --count 5 --out spectrum.csv
    python hillspec.py verify thm1 --potential mathieu_1.cfg --n-max 64 --json verdict.json
    python hillspec.py corpus --out-dir corpus/

After `pip install .` the same commands run as `hillspec ...`.

Set ``HILLSPEC_THREADS`` to refine eigenvalue clusters in parallel worker
processes.
"""
from __future__ import annotations

import logging
import sys

from hill_spectra import (
    INTEGRATORS,
    ROOT,
    VERSION,
    FourierPotential,
    RunConfig,
    compute_spectrum,
    load_potential,
    main,
    run,
)

__all__ = [
    "entry",
    "main",
    "run",
    "RunConfig",
    "FourierPotential",
    "load_potential",
    "compute_spectrum",
    "INTEGRATORS",
    "ROOT",
    "VERSION",
]

logger = logging.getLogger(__name__)


def entry() -> int:
    """Console-script target: plain message logging, then the CLI."""
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    return main()


if __name__ == "__main__":
    sys.exit(entry())
