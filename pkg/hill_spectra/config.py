"""Constants and run configuration for the hill_spectra package."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from hill_spectra.errors import ConfigError

ROOT = Path(__file__).resolve().parent.parent
VERSION = "0.1.0"

# Numerical tolerances
COEFF_TOL = 1e-12
CHOP_TOL = 1e-14
INTEGRATOR_TOL = 1e-12
REFINE_TOL = 1e-10
CLUSTER_TOL = 1e-9
WRONSKIAN_WARN = 1e-8
MEMBERSHIP_FACTOR = 10
RECOVERY_TOL = 1e-3

# Decay classification
DECAY_POWER = 2
DECAY_RHO = 0.7
DECAY_TAU_ABS = 1e-3
DECAY_GROWTH = 1.25
RATIO_WINDOW = (0.8, 1.2)

# Desk-scale limits
MAX_COUNT = 400
MAX_NEWTON = 12
MAX_HARNESS_INDEX = 200

PARITIES = ("periodic", "antiperiodic")
METHODS = ("rk", "magnus")
SOURCES = ("floquet", "galerkin")
VARIANTS = ("unperturbed", "eigenvalue")
COMMANDS = ("spectrum", "gaps", "coeffs", "galerkin", "asym", "verify", "corpus")
HARNESSES = ("thm1", "thm2")

THREADS_ENV = "HILLSPEC_THREADS"


def worker_count() -> int:
    """Worker cap from ``HILLSPEC_THREADS``; 1 means in-process refinement."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation depends on.

    The canonical JSON form (sorted keys) is what :meth:`digest` hashes, and
    every emitted file cites that digest.
    """

    command: str
    harness: str | None = None
    potential: str | None = None
    parity: str = "periodic"
    count: int = 20
    cutoff: int | None = None
    m_min: int = 8
    m_max: int = 64
    n_max: int = 128
    n0: int = 32
    eps: float = 1.0
    tol: float = REFINE_TOL
    integrator_tol: float = INTEGRATOR_TOL
    cluster_tol: float = CLUSTER_TOL
    method: str = "rk"
    source: str = "floquet"
    variant: str = "unperturbed"
    rho: float = DECAY_RHO
    tau_abs: float = DECAY_TAU_ABS
    growth: float = DECAY_GROWTH
    out: str | None = None
    json_out: str | None = None
    summary: str | None = None
    out_dir: str | None = None
    seed: int = 1
    workers: int | None = None

    def validate(self) -> None:
        """Raise ``ConfigError`` on the first inconsistent field."""
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "verify" and self.harness not in HARNESSES:
            raise ConfigError(f"verify needs one of {', '.join(HARNESSES)}")
        if self.command == "corpus":
            if not self.out_dir:
                raise ConfigError("corpus needs --out-dir")
        elif not self.potential:
            raise ConfigError(f"{self.command} needs --potential")
        for name in ("tol", "integrator_tol", "cluster_tol", "eps", "rho", "tau_abs", "growth"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 1e-14 < self.integrator_tol < 1e-4:
            raise ConfigError(f"integrator tolerance must lie in (1e-14, 1e-4), got {self.integrator_tol}")
        if not self.rho < 1:
            raise ConfigError(f"rho must be below 1, got {self.rho}")
        if not self.growth >= 1:
            raise ConfigError(f"growth must be at least 1, got {self.growth}")
        if not 1 <= self.count <= MAX_COUNT:
            raise ConfigError(f"count must lie in [1, {MAX_COUNT}], got {self.count}")
        if self.cutoff is not None and self.cutoff < 1:
            raise ConfigError(f"cutoff must be positive, got {self.cutoff}")
        if not 2 <= self.m_min <= self.m_max:
            raise ConfigError(f"m range must satisfy 2 <= m_min <= m_max, got {self.m_min}:{self.m_max}")
        if 2 * self.m_max + 3 > MAX_COUNT:
            raise ConfigError(f"m_max {self.m_max} needs more than {MAX_COUNT} eigenvalues")
        if not 16 <= self.n_max <= MAX_HARNESS_INDEX:
            raise ConfigError(f"n_max must lie in [16, {MAX_HARNESS_INDEX}], got {self.n_max}")
        if not 4 <= self.n0 <= MAX_HARNESS_INDEX // 2:
            raise ConfigError(f"n0 must lie in [4, {MAX_HARNESS_INDEX // 2}], got {self.n0}")
        if self.parity not in PARITIES:
            raise ConfigError(f"parity must be one of {PARITIES}, got {self.parity!r}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.source not in SOURCES:
            raise ConfigError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        for name in ("out", "json_out", "summary"):
            target = getattr(self, name)
            if target and not Path(target).resolve().parent.is_dir():
                raise ConfigError(f"output directory for {name} does not exist: {Path(target).parent}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**raw)
        except TypeError as e:
            raise ConfigError(str(e)) from None

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()
