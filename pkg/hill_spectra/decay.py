"""Finite-data decay verdicts and the end-to-end verification harnesses.

An o(n⁻²) claim cannot be falsified at one index, so the classifier
watches the maxima of n²·|s_n| over dyadic blocks [2^k, 2^{k+1}):

  small_o     every recent block maximum falls by at least ρ, or the last
              one is already below τ_abs;
  big_O_only  block maxima grow by at most ``growth``;
  not_big_O   otherwise.
"""
from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np

from hill_spectra import floquet, galerkin
from hill_spectra.asymptotics import recover_c0, recover_l2norm
from hill_spectra.config import (
    CLUSTER_TOL,
    INTEGRATOR_TOL,
    MAX_HARNESS_INDEX,
    MEMBERSHIP_FACTOR,
    RATIO_WINDOW,
    RECOVERY_TOL,
    REFINE_TOL,
)
from hill_spectra.errors import (
    ConfigError,
    GapRatioViolation,
    ImplicationViolation,
    InsufficientRangeError,
    RecoveryViolation,
)
from hill_spectra.models import (
    DecayBlock,
    DecaySequence,
    DecayThresholds,
    DecayVerdict,
    GapTable,
    ImplicationReport,
    MembershipEntry,
    RatioEntry,
    SpectrumTable,
    UniquenessReport,
)
from hill_spectra.parity import PERIODIC, free_level, parity_of_level
from hill_spectra.potential import FourierPotential

logger = logging.getLogger(__name__)

TRANSITIONS = 3


def _blocks(seq: DecaySequence) -> list[DecayBlock]:
    scaled = seq.scaled
    blocks = []
    k = int(math.floor(math.log2(seq.n_min)))
    while 2**k <= seq.n_max:
        start, stop = max(2**k, seq.n_min), min(2 ** (k + 1) - 1, seq.n_max)
        if stop - start + 1 >= 2 ** (k - 1):
            window = scaled[start - seq.n_min : stop - seq.n_min + 1]
            blocks.append(DecayBlock(start=start, stop=stop, peak=float(window.max())))
        k += 1
    return blocks


def classify(seq: DecaySequence, thresholds: DecayThresholds | None = None) -> DecayVerdict:
    thresholds = thresholds or DecayThresholds()
    if seq.n_min < 4 or seq.n_max < 4 * seq.n_min:
        raise InsufficientRangeError(
            f"decay range {seq.n_min}..{seq.n_max} needs n_min >= 4 and n_max >= 4*n_min"
        )
    blocks = _blocks(seq)
    if len(blocks) < 2:
        raise InsufficientRangeError(f"decay range {seq.n_min}..{seq.n_max} spans fewer than two dyadic blocks")

    recent = blocks[-(TRANSITIONS + 1):]
    ratios = []
    for prev, cur in zip(recent, recent[1:]):
        if prev.peak > 0:
            ratios.append(cur.peak / prev.peak)
        else:
            ratios.append(0.0 if cur.peak == 0 else math.inf)
    tail = recent[-1].peak

    if all(r <= thresholds.rho for r in ratios) or tail < thresholds.tau_abs:
        label = "small_o"
    elif all(r <= thresholds.growth for r in ratios):
        label = "big_O_only"
    else:
        label = "not_big_O"
    return DecayVerdict(
        classification=label,
        tail_statistic=tail,
        blocks=tuple(blocks),
        ratios=tuple(ratios),
        thresholds=thresholds,
    )


def gap_sequence(gaps: GapTable, n_min: int, n_max: int) -> DecaySequence:
    values = [gaps.entry(n).length for n in range(n_min, n_max + 1)]
    return DecaySequence(values=np.array(values), n_min=n_min)


def coefficient_sequence(q: FourierPotential, n_min: int, n_max: int) -> DecaySequence:
    return DecaySequence(values=np.abs(q.coefficients(np.arange(n_min, n_max + 1))), n_min=n_min)


def _spectrum(q: FourierPotential, count: int, source: str, **solver) -> SpectrumTable:
    if source == "galerkin":
        return galerkin.spectrum_table(q, count)
    return floquet.compute_spectrum(q, count, **solver)


def theorem1_harness(
    q: FourierPotential,
    n_max: int,
    *,
    thresholds: DecayThresholds | None = None,
    source: str = "floquet",
    tol: float = REFINE_TOL,
    integrator_tol: float = INTEGRATOR_TOL,
    cluster_tol: float = CLUSTER_TOL,
    method: str = "rk",
    workers: int | None = None,
) -> ImplicationReport:
    """Classify gaps and coefficients and compare the implication directions.

    Also tabulates l_n / (2|c_n|) wherever |c_n| clears ten times the
    solver resolution; ``ratio_ok`` checks that band on n ≥ n_min.
    """
    if not 16 <= n_max <= MAX_HARNESS_INDEX:
        raise ConfigError(f"n_max must lie in [16, {MAX_HARNESS_INDEX}], got {n_max}")
    n_min = max(4, n_max // 8)
    spectrum = _spectrum(
        q, n_max + 1, source,
        tol=tol, integrator_tol=integrator_tol, cluster_tol=cluster_tol, method=method, workers=workers,
    )
    gaps = floquet.gap_table(spectrum, cluster_tol)
    gap_verdict = classify(gap_sequence(gaps, n_min, n_max), thresholds)
    coeff_verdict = classify(coefficient_sequence(q, n_min, n_max), thresholds)

    ratios = []
    for e in gaps:
        coeff = abs(q.coefficient(e.n))
        if coeff > 10 * cluster_tol * (1.0 + free_level(e.n)):
            ratios.append(RatioEntry(n=e.n, gap=e.length, coeff=coeff, ratio=e.length / (2 * coeff)))
    lo, hi = RATIO_WINDOW
    ratio_ok = all(lo <= r.ratio <= hi for r in ratios if r.n >= n_min)

    report = ImplicationReport(
        n_min=n_min,
        n_max=n_max,
        source=spectrum.source,
        gaps=gap_verdict,
        coeffs=coeff_verdict,
        ratios=ratios,
        ratio_ok=ratio_ok,
    )
    logger.info(
        "gaps: %s, coefficients: %s, implication %s (O-form %s)",
        gap_verdict.classification, coeff_verdict.classification,
        report.implication, report.implication_big_o,
    )
    return report


def check_implication(report: ImplicationReport) -> None:
    """Raise on a violated implication, or on a gap ratio outside the window while gaps are O(n⁻²)."""
    if report.implication == "violated":
        raise ImplicationViolation(
            f"gaps decay like o(n^-2) on {report.n_min}..{report.n_max} "
            f"but coefficients classify {report.coeffs.classification}"
        )
    if report.implication_big_o == "violated":
        raise ImplicationViolation(
            f"gaps decay like O(n^-2) on {report.n_min}..{report.n_max} "
            f"but coefficients classify {report.coeffs.classification}"
        )
    if report.gaps.is_big_o and not report.ratio_ok:
        lo, hi = RATIO_WINDOW
        outside = [r.n for r in report.ratios if r.n >= report.n_min and not lo <= r.ratio <= hi]
        raise GapRatioViolation(f"l_n / (2|c_n|) leaves [{lo}, {hi}] at n = {outside}")


def theorem2_harness(
    q: FourierPotential,
    n0: int,
    eps: float,
    *,
    source: str = "floquet",
    tol: float = REFINE_TOL,
    integrator_tol: float = INTEGRATOR_TOL,
    cluster_tol: float = CLUSTER_TOL,
    method: str = "rk",
    workers: int | None = None,
) -> UniquenessReport:
    """Check l_n < ε n⁻² and (nπ)² ∈ spectrum for n0 < n ≤ 2·n0, then recover c_0 and ∫q²."""
    if not 4 <= n0 <= MAX_HARNESS_INDEX // 2:
        raise ConfigError(f"n0 must lie in [4, {MAX_HARNESS_INDEX // 2}], got {n0}")
    if not eps > 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    spectrum = _spectrum(
        q, 2 * n0 + 1, source,
        tol=tol, integrator_tol=integrator_tol, cluster_tol=cluster_tol, method=method, workers=workers,
    )
    gaps = floquet.gap_table(spectrum, cluster_tol)
    window = range(n0 + 1, 2 * n0 + 1)
    worst = max(gaps.entry(n).length * n * n for n in window)

    membership = []
    for n in window:
        parity = parity_of_level(n)
        level = free_level(n)
        values = spectrum.eigenvalues(parity)
        nearest = float(values[np.argmin(np.abs(values - level))])
        distance = abs(nearest - level)
        membership.append(
            MembershipEntry(
                n=n,
                parity=parity,
                level=level,
                nearest=nearest,
                distance=distance,
                member=distance < MEMBERSHIP_FACTOR * tol * (1.0 + level),
            )
        )

    m_range = (n0 // 2, n0 - 1)
    # per-pair eigenvalue resolution, propagated through both recoveries
    resolution = MEMBERSHIP_FACTOR * tol * (1.0 + free_level(2 * n0))
    c0 = recover_c0(spectrum, m_range, PERIODIC)
    c0_error = resolution * c0.gain
    c0 = dataclasses.replace(c0, tolerance=max(RECOVERY_TOL, c0_error))
    l2 = recover_l2norm(spectrum, c0.estimate, m_range, PERIODIC)
    l2 = dataclasses.replace(l2, tolerance=max(RECOVERY_TOL, (resolution + c0_error) * l2.gain))
    report = UniquenessReport(
        n0=n0,
        eps=eps,
        source=spectrum.source,
        gap_hypothesis=worst < eps,
        worst_scaled_gap=worst,
        membership=membership,
        c0=c0,
        l2norm=l2,
    )
    logger.info(
        "gap hypothesis %s, membership %s: %s",
        "holds" if report.gap_hypothesis else "fails",
        "holds" if report.membership_holds else "fails",
        report.conclusion,
    )
    return report


def check_recovery(report: UniquenessReport) -> None:
    if report.hypotheses_hold and not report.recovered_zero:
        raise RecoveryViolation(
            f"hypotheses hold for n > {report.n0} but recovered c0 = {report.c0.estimate:.3e}, "
            f"∫q² = {report.l2norm.estimate:.3e}"
        )
