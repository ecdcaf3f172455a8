"""Built-in potential corpus used by the harness acceptance runs.

Files are JSON potential files (see :func:`hill_spectra.potential.load_potential`)
with a ``.cfg`` suffix, plus a ``manifest.json`` listing them.  Output
depends only on the seed.
"""
from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import numpy as np

from hill_spectra.errors import ConfigError
from hill_spectra.potential import FourierPotential, cosine_series, from_coefficients, potential_payload

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 128
SAMPLE_DEGREE = 48
SAMPLE_EXPONENTS = (2.5, 3.0, 4.0)
MATHIEU_AMPLITUDES = (0.5, 1.0, 2.0)
CONSTANTS = (3.0, 5.0, -5.0)
RANDOM_DEGREE = 4


def _label(value: float) -> str:
    return f"{value:g}".replace("-", "m").replace(".", "p")


def power_law_samples(exponent: float, points: int = SAMPLE_POINTS, degree: int = SAMPLE_DEGREE) -> list[float]:
    """q(j/N) for c_n = c_{-n} = n^{-s}, 1 ≤ n ≤ degree."""
    x = np.arange(points) / points
    ns = np.arange(1, degree + 1)
    values = 2.0 * np.cos(2 * math.pi * np.multiply.outer(x, ns)) @ ns.astype(float) ** -exponent
    return [float(v) for v in values]


def random_potential(rng: np.random.Generator, degree: int = RANDOM_DEGREE) -> FourierPotential:
    table: dict[int, complex] = {0: 0.0}
    for m in range(1, degree + 1):
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) / 2
        table[m], table[-m] = c, c.conjugate()
    return from_coefficients(table)


def build_corpus(seed: int = 1) -> dict[str, dict]:
    """Name -> potential file payload."""
    entries: dict[str, dict] = {"zero": potential_payload(FourierPotential(np.zeros(1)))}
    for value in CONSTANTS:
        entries[f"constant_{_label(value)}"] = potential_payload(cosine_series({}, constant=value))
    for amp in MATHIEU_AMPLITUDES:
        entries[f"mathieu_{_label(amp)}"] = potential_payload(cosine_series({1: amp}))
    entries["two_mode"] = potential_payload(cosine_series({1: 2.0, 2: 0.5}))
    entries["shifted_mathieu"] = potential_payload(cosine_series({1: 2.0}, constant=3.0))
    entries[f"random_{seed}"] = potential_payload(random_potential(np.random.default_rng(seed)))
    for s in SAMPLE_EXPONENTS:
        entries[f"power_{_label(s)}"] = {"kind": "samples", "samples": power_law_samples(s)}
    return entries


def write_corpus(out_dir: str | Path, seed: int = 1) -> list[Path]:
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise ConfigError(f"corpus directory does not exist: {out_dir}")
    written = []
    manifest = {"seed": seed, "files": {}}
    for name, payload in build_corpus(seed).items():
        path = out_dir / f"{name}.cfg"
        try:
            path.write_text(json.dumps(payload, indent=4, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot write corpus file {path}: {e}") from None
        manifest["files"][path.name] = payload["kind"]
        written.append(path)
        logger.info("  ✅ %s", path.name)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=4, sort_keys=True) + "\n", encoding="utf-8")
    written.append(manifest_path)
    return written
