"""Eigenvalue corrections for the pair near the free level (nπ)².

With n the edge frequency of pair m (2m+2 periodic, 2m+1 anti-periodic)
and Λ(k) = λ − ((2k+2)π)² (resp. ((2k+1)π)²), the denominators are
D(s) = Λ(m − s) = λ − ((n − 2s)π)²; at λ = (nπ)² this is 4π²·s·(n − s).

    a1 = Σ c_{m1} c_{−m1} / D(m1)
    a2 = Σ c_{m1} c_{m2} c_{−m1−m2} / (D(m1) D(m1+m2))
    b1 = Σ c_{m1} c_{n−m1} / D(m1)
    b2 = Σ c_{m1} c_{m2} c_{n−m1−m2} / (D(m1) D(m1+m2))

with m1, m1+m2 ∉ {0, n}.  Primed sums reflect the denominators to
D(−m1), D(−m1−m2), replace n by −n in the b numerators and forbid
{0, −n} instead.  All sums are finite because q is band-limited.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from hill_spectra.config import COEFF_TOL
from hill_spectra.errors import BookkeepingError, DegenerateDenominatorError, PotentialError
from hill_spectra.models import (
    AsymptoticReport,
    AsymptoticRow,
    CorrectionSet,
    PairPrediction,
    RecoveryResult,
    SpectrumTable,
    SweepRow,
)
from hill_spectra.parity import PERIODIC, check_parity, edge_index, free_level
from hill_spectra.potential import FourierPotential, antiderivative, l2_norm_squared

logger = logging.getLogger(__name__)

DEGENERATE_FACTOR = 1e-8
IMAG_TOL = 1e-10
PI2 = math.pi**2


def unperturbed(m: int, parity: str = PERIODIC) -> float:
    return free_level(edge_index(m, parity))


def remainder_budget(m: int) -> float:
    """(ln m / m)³, the scale unexplained residuals are reported against."""
    if m < 2:
        raise ValueError(f"remainder budget needs m >= 2, got {m}")
    return (math.log(m) / m) ** 3


@dataclass(frozen=True)
class DenominatorContext:
    """Denominators for pair *m* evaluated at *lam*.

    Construction checks |D(s)| > |s|·|n − s| for every s ≠ 0, n in
    [−M, n + M], which covers every index the sums can touch for a
    degree-M potential.
    """

    m: int
    parity: str
    lam: float
    bandwidth: int
    variant: str = "unperturbed"
    j: int | None = None
    n: int = field(init=False)

    def __post_init__(self) -> None:
        check_parity(self.parity)
        object.__setattr__(self, "n", edge_index(self.m, self.parity))
        window = np.arange(-self.bandwidth, self.n + self.bandwidth + 1)
        window = window[(window != 0) & (window != self.n)]
        if window.size:
            values = np.abs(self.shift(window))
            bound = np.abs(window) * np.abs(self.n - window)
            bad = values <= bound
            if np.any(bad):
                s = int(window[np.argmax(bad)])
                raise DegenerateDenominatorError(
                    f"λ = {self.lam:.10g} is outside the pairing window of m={self.m}: "
                    f"|D({s})| = {abs(float(self.shift(s))):.3e} <= {abs(s) * abs(self.n - s)}"
                )

    @classmethod
    def at_unperturbed(cls, m: int, parity: str, bandwidth: int) -> DenominatorContext:
        return cls(m=m, parity=parity, lam=unperturbed(m, parity), bandwidth=bandwidth)

    @classmethod
    def at_eigenvalue(cls, m: int, parity: str, lam: float, j: int, bandwidth: int) -> DenominatorContext:
        return cls(m=m, parity=parity, lam=float(lam), bandwidth=bandwidth, variant="eigenvalue", j=j)

    def __call__(self, k):
        """Λ(k) = λ − (frequency of level k)²."""
        k = np.asarray(k)
        freq = 2 * k + 2 if self.parity == PERIODIC else 2 * k + 1
        return self.lam - PI2 * freq.astype(float) ** 2

    def shift(self, s):
        """D(s) = Λ(m − s)."""
        return self(self.m - np.asarray(s))

    def guarded(self, s) -> np.ndarray:
        values = self.shift(s)
        floor = DEGENERATE_FACTOR * (1.0 + abs(self.lam))
        if np.any(np.abs(values) < floor):
            raise DegenerateDenominatorError(f"|Λ| below {floor:.3e} for m={self.m} at λ = {self.lam:.10g}")
        return values


def admissible_indices(q: FourierPotential, ctx: DenominatorContext, target: int, *, order: int, primed: bool):
    """Index grids for the first- or second-order sums, forbidden indices removed.

    Order 1 returns (m1,); order 2 returns (m1, p) with p = m1 + m2.
    Numerators are c_{m1} c_{target−m1} and c_{m1} c_{p−m1} c_{target−p}.
    """
    forbidden = (0, -ctx.n) if primed else (0, ctx.n)
    M = q.degree
    m1 = np.arange(-M, M + 1)
    keep1 = ~np.isin(m1, forbidden)
    if order == 1:
        return (m1[keep1],)
    p = np.arange(target - M, target + M + 1)
    keep2 = ~np.isin(p, forbidden)
    g1, gp = np.meshgrid(m1[keep1], p[keep2], indexing="ij")
    band = np.abs(gp - g1) <= M
    return g1[band], gp[band]


def _first_order(q: FourierPotential, ctx: DenominatorContext, target: int, primed: bool) -> complex:
    (m1,) = admissible_indices(q, ctx, target, order=1, primed=primed)
    if m1.size == 0:
        return 0j
    denom = ctx.guarded(-m1 if primed else m1)
    return complex(np.sum(q.coefficients(m1) * q.coefficients(target - m1) / denom))


def _second_order(q: FourierPotential, ctx: DenominatorContext, target: int, primed: bool) -> complex:
    m1, p = admissible_indices(q, ctx, target, order=2, primed=primed)
    if m1.size == 0:
        return 0j
    d1 = ctx.guarded(-m1 if primed else m1)
    d2 = ctx.guarded(-p if primed else p)
    numer = q.coefficients(m1) * q.coefficients(p - m1) * q.coefficients(target - p)
    return complex(np.sum(numer / (d1 * d2)))


def a1_sum(q: FourierPotential, ctx: DenominatorContext, primed: bool = False) -> complex:
    return _first_order(q, ctx, 0, primed)


def a2_sum(q: FourierPotential, ctx: DenominatorContext, primed: bool = False) -> complex:
    return _second_order(q, ctx, 0, primed)


def b_sums(q: FourierPotential, ctx: DenominatorContext, primed: bool = False) -> tuple[complex, complex]:
    target = -ctx.n if primed else ctx.n
    return _first_order(q, ctx, target, primed), _second_order(q, ctx, target, primed)


def _require_zero_mean(q: FourierPotential, what: str) -> None:
    if abs(q.mean) > COEFF_TOL:
        raise PotentialError(f"{what} needs c_0 = 0, got c_0 = {q.mean:.3e}")


def a1_closed_form(q: FourierPotential, m: int, parity: str = PERIODIC) -> float:
    """∫q² / (2πn)², the leading behaviour of a1 when c_0 = 0."""
    _require_zero_mean(q, "a1_closed_form")
    n = edge_index(m, parity)
    return l2_norm_squared(q) / (2.0 * math.pi * n) ** 2


def b1_integral_form(q: FourierPotential, m: int, parity: str = PERIODIC) -> complex:
    """−Σ_{m1≠0,n} Q_{m1} Q_{n−m1}: the coefficient form of −∫(Q − Q_0)² e^{−i2nπx}."""
    _require_zero_mean(q, "b1_integral_form")
    n = edge_index(m, parity)
    table = antiderivative(q)
    lookup = dict(zip(table.indices.tolist(), table.values.tolist()))
    return -sum(
        (qk * lookup.get(n - k, 0j) for k, qk in lookup.items() if k != n),
        start=0j,
    )


def s_identities(q: FourierPotential, m: int, parity: str = PERIODIC) -> tuple[complex, complex, complex, complex]:
    """S1..S4 with a2((nπ)²) = (S1 + S2 + S3 + S4) / ((2π)⁴ n²).

    With T = c_{m1} c_{p−m1} c_{−p} and m1, p ∉ {0, n}:
    S1 = ΣT/(m1 p), S2 = ΣT/(p(n−m1)), S3 = ΣT/(m1(n−p)), S4 = ΣT/((n−m1)(n−p)).
    S1 = 4π²∫(Q − Q_0)² q vanishes once n exceeds the degree of q.
    """
    _require_zero_mean(q, "s_identities")
    ctx = DenominatorContext.at_unperturbed(m, parity, q.degree)
    n = ctx.n
    m1, p = admissible_indices(q, ctx, 0, order=2, primed=False)
    if m1.size == 0:
        return 0j, 0j, 0j, 0j
    t = q.coefficients(m1) * q.coefficients(p - m1) * q.coefficients(-p)
    m1, p = m1.astype(float), p.astype(float)
    return (
        complex(np.sum(t / (m1 * p))),
        complex(np.sum(t / (p * (n - m1)))),
        complex(np.sum(t / (m1 * (n - p)))),
        complex(np.sum(t / ((n - m1) * (n - p)))),
    )


def s1_removed(q: FourierPotential, m: int, parity: str = PERIODIC) -> complex:
    """The S1 terms with m1 = n or p = n that the forbidden index drops.

    S1 + s1_removed equals the unrestricted sum 4π²∫(Q − Q_0)²q, which is 0
    for every m; nothing is removed once n exceeds the degree of q.
    """
    _require_zero_mean(q, "s1_removed")
    n = edge_index(m, parity)
    idx = np.arange(-q.degree, q.degree + 1)
    m1, p = np.meshgrid(idx, idx, indexing="ij")
    keep = (m1 != 0) & (p != 0) & (np.abs(p - m1) <= q.degree) & ((m1 == n) | (p == n))
    m1, p = m1[keep], p[keep]
    if m1.size == 0:
        return 0j
    t = q.coefficients(m1) * q.coefficients(p - m1) * q.coefficients(-p)
    return complex(np.sum(t / (m1 * p).astype(float)))


def corrections(
    q: FourierPotential,
    m: int,
    parity: str = PERIODIC,
    *,
    variant: str = "unperturbed",
    lam: float | None = None,
    j: int = 1,
) -> CorrectionSet:
    """Every sum for pair *m*, with denominators at (nπ)² or at a measured λ."""
    if variant == "unperturbed":
        ctx = DenominatorContext.at_unperturbed(m, parity, q.degree)
    elif variant == "eigenvalue":
        if lam is None:
            raise ValueError("variant 'eigenvalue' needs the measured eigenvalue")
        ctx = DenominatorContext.at_eigenvalue(m, parity, lam, j, q.degree)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    b1, b2 = b_sums(q, ctx)
    b1p, b2p = b_sums(q, ctx, primed=True)
    return CorrectionSet(
        m=m,
        parity=parity,
        variant=variant,
        lam=ctx.lam,
        a1=a1_sum(q, ctx),
        a2=a2_sum(q, ctx),
        b1=b1,
        b2=b2,
        a1p=a1_sum(q, ctx, primed=True),
        a2p=a2_sum(q, ctx, primed=True),
        b1p=b1p,
        b2p=b2p,
        budget=remainder_budget(m) if m >= 2 else math.nan,
    )


def predict_pair(q: FourierPotential, m: int, corrections: CorrectionSet) -> PairPrediction:
    """Center (nπ)² + c_0 + a1 + a2 and splitting 2|c_n|."""
    shift = corrections.a1 + corrections.a2
    if abs(shift.imag) > IMAG_TOL:
        raise BookkeepingError(
            f"a1 + a2 has imaginary part {shift.imag:.3e} for m={m}; the index bookkeeping is wrong"
        )
    n = edge_index(m, corrections.parity)
    return PairPrediction(
        center=free_level(n) + q.mean + shift.real,
        splitting=2.0 * abs(q.coefficient(n)),
    )


def _pair_offsets(spectrum: SpectrumTable, m_range: tuple[int, int], parity: str):
    m_lo, m_hi = m_range
    if m_lo > m_hi:
        raise ValueError(f"empty m range {m_lo}:{m_hi}")
    ms, offsets = [], []
    for m in range(m_lo, m_hi + 1):
        pair = spectrum.pair(parity, m)
        offsets.append(0.5 * (pair[0] + pair[1]) - unperturbed(m, parity))
        ms.append(m)
    return ms, offsets


def _second_order_design(ms, parity: str) -> np.ndarray:
    """Columns 1 and 1/(2πn)², the shape of c_0 + ∫q²/(2πn)²."""
    x = np.array([1.0 / (2.0 * math.pi * edge_index(m, parity)) ** 2 for m in ms])
    return np.column_stack([np.ones_like(x), x])


def recover_c0(spectrum: SpectrumTable, m_range: tuple[int, int], parity: str = PERIODIC) -> RecoveryResult:
    """Estimate c_0 from the pair centres λ_{2m+j} − (nπ)² over *m_range*.

    The centres are fitted by least squares to c_0 + L/(2πn)², so the
    second-order shift does not leak into c_0; a one-pair range falls back
    to the plain offset.  ``gain`` is Σ|w_m| over the intercept weights,
    the factor a uniform per-pair eigenvalue error can grow by.
    ``envelope`` is the smallest C with |offset_m − estimate| ≤ C·ln m / m.
    """
    ms, offsets = _pair_offsets(spectrum, m_range, parity)
    if len(ms) < 2:
        estimate, gain = float(offsets[0]), 1.0
    else:
        weights = np.linalg.pinv(_second_order_design(ms, parity))[0]
        estimate, gain = float(weights @ np.asarray(offsets)), float(np.abs(weights).sum())
    envelope = max(
        abs(o - estimate) * m / math.log(m) for m, o in zip(ms, offsets) if m >= 2
    ) if any(m >= 2 for m in ms) else 0.0
    return RecoveryResult(
        quantity="c0",
        estimate=estimate,
        ms=tuple(ms),
        estimates=tuple(float(o) for o in offsets),
        envelope=float(envelope),
        gain=gain,
    )


def recover_l2norm(
    spectrum: SpectrumTable, q_c0: float, m_range: tuple[int, int], parity: str = PERIODIC
) -> RecoveryResult:
    """Estimate ∫q² as (2πn)²·(λ_{2m+j} − (nπ)² − c_0), averaged over j.

    The reported estimate is the one at the largest m, whose (2πn)² is the
    ``gain``; ``envelope`` is the spread of the per-m estimates.
    """
    ms, offsets = _pair_offsets(spectrum, m_range, parity)
    scales = [(2.0 * math.pi * edge_index(m, parity)) ** 2 for m in ms]
    estimates = [s * (o - q_c0) for s, o in zip(scales, offsets)]
    return RecoveryResult(
        quantity="l2norm",
        estimate=float(estimates[-1]),
        ms=tuple(ms),
        estimates=tuple(float(e) for e in estimates),
        envelope=float(max(estimates) - min(estimates)),
        gain=scales[-1],
    )


def asymptotic_report(
    q: FourierPotential,
    spectrum: SpectrumTable,
    m_range: tuple[int, int],
    parity: str = PERIODIC,
    variant: str = "unperturbed",
) -> AsymptoticReport:
    report = AsymptoticReport(parity=parity, variant=variant, source=spectrum.source)
    m_lo, m_hi = m_range
    for m in range(m_lo, m_hi + 1):
        lam1, lam2 = spectrum.pair(parity, m)
        if variant == "eigenvalue":
            preds = [
                predict_pair(q, m, corrections(q, m, parity, variant=variant, lam=lam, j=j))
                for j, lam in ((1, lam1), (2, lam2))
            ]
            pred = PairPrediction(
                center=0.5 * (preds[0].center + preds[1].center), splitting=preds[0].splitting
            )
        else:
            pred = predict_pair(q, m, corrections(q, m, parity))
        gap = lam2 - lam1
        resid_center = 0.5 * (lam1 + lam2) - pred.center
        report.rows.append(
            AsymptoticRow(
                m=m,
                lambda1=lam1,
                lambda2=lam2,
                center_pred=pred.center,
                split_pred=pred.splitting,
                gap_meas=gap,
                resid_center=resid_center,
                resid_gap=gap - pred.splitting,
                m2_resid_center=m * m * resid_center,
                budget=remainder_budget(m) if m >= 2 else math.nan,
            )
        )
    logger.debug("asymptotic report: %d rows (%s, %s)", len(report.rows), parity, variant)
    return report


def correction_sweep(q: FourierPotential, ms, parity: str = PERIODIC) -> list[SweepRow]:
    """Per m: m²|a1 − closed form|, m²|a2|, |S1| and max(|S2|, |S3|, |S4|)."""
    rows = []
    for m in ms:
        ctx = DenominatorContext.at_unperturbed(m, parity, q.degree)
        s1, s2, s3, s4 = s_identities(q, m, parity)
        rows.append(
            SweepRow(
                m=m,
                m2_a1_defect=m * m * abs(a1_sum(q, ctx) - a1_closed_form(q, m, parity)),
                m2_a2=m * m * abs(a2_sum(q, ctx)),
                s1=abs(s1),
                s_rest=max(abs(s2), abs(s3), abs(s4)),
            )
        )
    return rows
