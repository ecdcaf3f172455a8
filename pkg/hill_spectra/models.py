"""Data models for spectra, gaps, corrections and verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hill_spectra.config import DECAY_GROWTH, DECAY_POWER, DECAY_RHO, DECAY_TAU_ABS
from hill_spectra.parity import PERIODIC, check_parity


@dataclass(frozen=True)
class FloquetState:
    """Fundamental solutions at x = 1 and their λ-derivatives.

    y1(0) = 1, y1'(0) = 0 and y2(0) = 0, y2'(0) = 1; ``z*`` fields are
    ∂/∂λ of the matching ``y*`` fields.
    """

    lam: float
    y1: float
    dy1: float
    y2: float
    dy2: float
    z1: float
    dz1: float
    z2: float
    dz2: float
    method: str = "rk"

    @property
    def discriminant(self) -> float:
        return self.y1 + self.dy2

    @property
    def discriminant_derivative(self) -> float:
        return self.z1 + self.dz2

    @property
    def wronskian(self) -> float:
        return self.y1 * self.dy2 - self.dy1 * self.y2

    @property
    def wronskian_defect(self) -> float:
        """|W − 1| relative to the size of the products that cancel in W."""
        scale = max(1.0, abs(self.y1 * self.dy2), abs(self.dy1 * self.y2))
        return abs(self.wronskian - 1.0) / scale

    def monodromy(self) -> np.ndarray:
        return np.array([[self.y1, self.y2], [self.dy1, self.dy2]])

    def sensitivity(self) -> np.ndarray:
        return np.array([[self.z1, self.z2], [self.dz1, self.dz2]])


@dataclass
class SpectrumTable:
    periodic: np.ndarray
    antiperiodic: np.ndarray
    periodic_residuals: np.ndarray
    antiperiodic_residuals: np.ndarray
    source: str = "floquet"

    @property
    def count(self) -> int:
        return min(self.periodic.size, self.antiperiodic.size)

    def eigenvalues(self, parity: str) -> np.ndarray:
        return self.periodic if check_parity(parity) == PERIODIC else self.antiperiodic

    def residuals(self, parity: str) -> np.ndarray:
        return self.periodic_residuals if check_parity(parity) == PERIODIC else self.antiperiodic_residuals

    def pairing(self, parity: str, index: int) -> tuple[int, int] | None:
        """(m, j) label of eigenvalue *index*; ``None`` for the unpaired λ_0."""
        if check_parity(parity) == PERIODIC:
            return None if index == 0 else ((index - 1) // 2, (index - 1) % 2 + 1)
        return index // 2, index % 2 + 1

    def pair(self, parity: str, m: int) -> tuple[float, float]:
        values = self.eigenvalues(parity)
        lo = 2 * m + 1 if parity == PERIODIC else 2 * m
        if lo + 1 >= values.size:
            raise IndexError(f"{parity} pair m={m} needs {lo + 2} eigenvalues, have {values.size}")
        return float(values[lo]), float(values[lo + 1])


@dataclass(frozen=True)
class GapEntry:
    n: int
    left: float
    right: float
    length: float


@dataclass
class GapTable:
    entries: list[GapEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def entry(self, n: int) -> GapEntry:
        return self.entries[n - 1]

    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.entries])


@dataclass(frozen=True)
class TruncatedOperator:
    parity: str
    cutoff: int
    modes: np.ndarray
    frequencies: np.ndarray
    matrix: np.ndarray
    shift: float = 0.0

    @property
    def dimension(self) -> int:
        return self.modes.size


@dataclass(frozen=True)
class EigenpairSet:
    """Lowest eigenpairs; column i of ``vectors`` is the coefficient table
    of eigenvector i over ``modes``."""

    parity: str
    cutoff: int
    modes: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    shift: float = 0.0

    @property
    def count(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class EdgeCoefficients:
    m: int
    parity: str
    u: tuple[complex, complex]
    v: tuple[complex, complex]
    tails: tuple[float, float]

    @property
    def norms(self) -> tuple[float, float]:
        return tuple(abs(u) ** 2 + abs(v) ** 2 for u, v in zip(self.u, self.v))

    @property
    def defects(self) -> tuple[float, float]:
        return tuple(abs(n - 1.0) for n in self.norms)


@dataclass(frozen=True)
class CorrectionSet:
    m: int
    parity: str
    variant: str
    lam: float
    a1: complex
    a2: complex
    b1: complex
    b2: complex
    a1p: complex
    a2p: complex
    b1p: complex
    b2p: complex
    budget: float


@dataclass(frozen=True)
class PairPrediction:
    center: float
    splitting: float

    @property
    def lower(self) -> float:
        return self.center - self.splitting / 2

    @property
    def upper(self) -> float:
        return self.center + self.splitting / 2


@dataclass(frozen=True)
class AsymptoticRow:
    m: int
    lambda1: float
    lambda2: float
    center_pred: float
    split_pred: float
    gap_meas: float
    resid_center: float
    resid_gap: float
    m2_resid_center: float
    budget: float


@dataclass
class AsymptoticReport:
    parity: str
    variant: str
    source: str
    rows: list[AsymptoticRow] = field(default_factory=list)


@dataclass(frozen=True)
class SweepRow:
    m: int
    m2_a1_defect: float
    m2_a2: float
    s1: float
    s_rest: float


@dataclass(frozen=True)
class RecoveryResult:
    """One recovered quantity with its per-m estimates.

    ``gain`` bounds how much a uniform eigenvalue error grows in ``estimate``;
    ``tolerance`` is the band around 0 a verdict treats as zero.
    """

    quantity: str
    estimate: float
    ms: tuple[int, ...]
    estimates: tuple[float, ...]
    envelope: float
    gain: float = 1.0
    tolerance: float = 0.0

    @property
    def is_zero(self) -> bool:
        return abs(self.estimate) <= self.tolerance


@dataclass(frozen=True)
class DecaySequence:
    """s_n for n = n_min, n_min+1, ...; ``scaled`` is n^power·|s_n|."""

    values: np.ndarray
    n_min: int
    power: int = DECAY_POWER

    @property
    def n_max(self) -> int:
        return self.n_min + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def scaled(self) -> np.ndarray:
        return self.indices.astype(float) ** self.power * np.abs(self.values)


@dataclass(frozen=True)
class DecayThresholds:
    rho: float = DECAY_RHO
    tau_abs: float = DECAY_TAU_ABS
    growth: float = DECAY_GROWTH


@dataclass(frozen=True)
class DecayBlock:
    start: int
    stop: int
    peak: float


@dataclass(frozen=True)
class DecayVerdict:
    classification: str
    tail_statistic: float
    blocks: tuple[DecayBlock, ...]
    ratios: tuple[float, ...]
    thresholds: DecayThresholds

    @property
    def is_small_o(self) -> bool:
        return self.classification == "small_o"

    @property
    def is_big_o(self) -> bool:
        return self.classification in ("small_o", "big_O_only")


@dataclass(frozen=True)
class RatioEntry:
    n: int
    gap: float
    coeff: float
    ratio: float


@dataclass
class ImplicationReport:
    n_min: int
    n_max: int
    source: str
    gaps: DecayVerdict
    coeffs: DecayVerdict
    ratios: list[RatioEntry]
    ratio_ok: bool

    @property
    def implication(self) -> str:
        """Status of "gaps o(n⁻²) ⇒ coefficients o(n⁻²)"."""
        if not self.gaps.is_small_o:
            return "vacuous"
        return "holds" if self.coeffs.is_small_o else "violated"

    @property
    def implication_big_o(self) -> str:
        """Status of "gaps O(n⁻²) ⇒ coefficients O(n⁻²)"."""
        if not self.gaps.is_big_o:
            return "vacuous"
        return "holds" if self.coeffs.is_big_o else "violated"


@dataclass(frozen=True)
class MembershipEntry:
    n: int
    parity: str
    level: float
    nearest: float
    distance: float
    member: bool


@dataclass
class UniquenessReport:
    n0: int
    eps: float
    source: str
    gap_hypothesis: bool
    worst_scaled_gap: float
    membership: list[MembershipEntry]
    c0: RecoveryResult
    l2norm: RecoveryResult

    @property
    def membership_holds(self) -> bool:
        return all(e.member for e in self.membership)

    @property
    def hypotheses_hold(self) -> bool:
        return self.gap_hypothesis and self.membership_holds

    @property
    def recovered_zero(self) -> bool:
        return self.c0.is_zero and self.l2norm.is_zero

    @property
    def conclusion(self) -> str:
        if not self.gap_hypothesis:
            return "gap hypothesis fails; no conclusion"
        if not self.membership_holds:
            return "membership fails; no conclusion"
        if self.recovered_zero:
            return "consistent with q = 0"
        return "recovery contradicts q = 0"


@dataclass
class ResultBundle:
    command: str
    digest: str
    files: dict[str, Path] = field(default_factory=dict)
    verdict: dict | None = None
    failure: str | None = None
