"""Tests for floquet: refined band edges, interlacing and gap tables."""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from hill_spectra import galerkin
from hill_spectra.corpus import random_potential
from hill_spectra.errors import ConfigError, InterlacingError, RootFindingError
from hill_spectra.floquet import (
    _cluster_layout,
    check_interlacing,
    check_root_count,
    compute_spectrum,
    count_below,
    discriminant,
    gap_table,
    plan_clusters,
    refine_cluster,
)
from hill_spectra.models import SpectrumTable
from hill_spectra.parity import ANTIPERIODIC, PERIODIC
from hill_spectra.potential import cosine_series

PI2 = math.pi**2


def free_levels(parity: str, count: int) -> np.ndarray:
    """(2kπ)² or ((2k+1)π)², each nonzero level twice."""
    if parity == PERIODIC:
        ks = (np.arange(count) + 1) // 2 * 2
    else:
        ks = np.arange(count) // 2 * 2 + 1
    return (ks * math.pi) ** 2


def test_free_spectrum(zero_potential):
    """q = 0: periodic (2kπ)² and anti-periodic ((2k+1)π)², each doubled, every gap closed."""
    spectrum = compute_spectrum(zero_potential, 20)
    assert spectrum.periodic[:5] == pytest.approx([0.0, 4 * PI2, 4 * PI2, 16 * PI2, 16 * PI2], abs=1e-9)
    for parity in (PERIODIC, ANTIPERIODIC):
        diff = np.max(np.abs(spectrum.eigenvalues(parity) - free_levels(parity, 20)))
        assert diff < 1e-9, f"{parity} free levels off by {diff:.2e}"
    assert spectrum.source == "floquet"
    assert not gap_table(spectrum).lengths().any(), "every free gap is closed"


@pytest.mark.parametrize("shift", [5.0, -5.0])
def test_constant_shifts_spectrum(zero_potential, shift):
    free = compute_spectrum(zero_potential, 8)
    shifted = compute_spectrum(cosine_series({}, constant=shift), 8)
    assert shifted.periodic == pytest.approx(free.periodic + shift, abs=1e-9)
    assert shifted.antiperiodic == pytest.approx(free.antiperiodic + shift, abs=1e-9)


@pytest.mark.parametrize(
    "q",
    [
        cosine_series({1: 0.5}),
        cosine_series({1: 1.0}),
        cosine_series({1: 2.0}),
        cosine_series({1: 2.0, 2: 0.5}),
        cosine_series({1: 2.0}, constant=3.0),
        random_potential(np.random.default_rng(1)),
    ],
    ids=["mathieu_0p5", "mathieu_1", "mathieu_2", "two_mode", "shifted_mathieu", "random_1"],
)
def test_floquet_agrees_with_galerkin(q):
    spectrum = compute_spectrum(q, 20)
    oracle = galerkin.spectrum_table(q, 20)
    for parity in (PERIODIC, ANTIPERIODIC):
        diff = np.max(np.abs(spectrum.eigenvalues(parity) - oracle.eigenvalues(parity)))
        assert diff < 1e-8, f"{parity} Floquet and Galerkin differ by {diff:.2e}"


def test_narrow_pair_keeps_both_edges(two_mode):
    """λ5 and λ6 sit 3.5e-7 apart, inside the cluster band; both stay as refined."""
    job = next(j for j in plan_clusters(two_mode, 7) if j.parity == PERIODIC and j.first == 5)
    result = refine_cluster(job)
    oracle = galerkin.eigenvalues(two_mode, PERIODIC, 7)
    assert result.values[0] != result.values[1]
    assert result.values == pytest.approx(tuple(oracle[5:7]), abs=1e-8)
    assert result.values[1] - result.values[0] == pytest.approx(oracle[6] - oracle[5], abs=1e-8)


def test_residual_is_taken_at_the_reported_root(mathieu):
    spectrum = compute_spectrum(mathieu, 3)
    for parity in (PERIODIC, ANTIPERIODIC):
        target = 2.0 if parity == PERIODIC else -2.0
        for value, residual in zip(spectrum.eigenvalues(parity), spectrum.residuals(parity)):
            assert residual == pytest.approx(abs(discriminant(mathieu, value) - target), rel=1e-9, abs=1e-15)


def test_closed_gap_reports_zero_length():
    spectrum = SpectrumTable(
        periodic=np.array([0.0, 10.0, 10.0 + 1e-12]),
        antiperiodic=np.array([1.0, 2.0, 8.0]),
        periodic_residuals=np.zeros(3),
        antiperiodic_residuals=np.zeros(3),
    )
    entry = gap_table(spectrum).entry(2)
    assert entry.length == 0.0
    assert entry.right - entry.left == pytest.approx(1e-12), "edges are reported as refined"


def test_root_count_matches_galerkin(mathieu):
    spectrum = compute_spectrum(mathieu, 5)
    check_root_count(mathieu, spectrum)
    values = spectrum.periodic.copy()
    values[2] = values[3]
    broken = dataclasses.replace(spectrum, periodic=values)
    with pytest.raises(RootFindingError, match="root was missed"):
        check_root_count(mathieu, broken)

def test_magnus_spectrum(mathieu):
    rk = compute_spectrum(mathieu, 4)
    magnus = compute_spectrum(mathieu, 4, method="magnus")
    assert magnus.periodic == pytest.approx(rk.periodic, abs=1e-7)
    assert magnus.antiperiodic == pytest.approx(rk.antiperiodic, abs=1e-7)


def test_mathieu_gaps(mathieu):
    """First gap ≈ 2|c_1| = 2; the second is second order, ≈ 1/(2π²)."""
    gaps = gap_table(compute_spectrum(mathieu, 5))
    assert gaps.entry(1).length == pytest.approx(2.0, abs=1e-3)
    assert gaps.entry(2).length == pytest.approx(1 / (2 * PI2), rel=1e-2)
    assert (gaps.lengths() >= 0).all(), "gap lengths must be nonnegative"


def test_gap_table_indexing():
    spectrum = SpectrumTable(
        periodic=np.array([0.0, 4.0, 5.0]),
        antiperiodic=np.array([1.0, 2.0, 8.0]),
        periodic_residuals=np.zeros(3),
        antiperiodic_residuals=np.zeros(3),
    )
    gaps = gap_table(spectrum)
    assert [e.n for e in gaps] == [1, 2]
    assert gaps.entry(1).length == 1.0, "l_1 = μ_1 − μ_0"
    assert gaps.entry(2).length == 1.0, "l_2 = λ_2 − λ_1"


def test_interlacing_violation_is_detected():
    spectrum = SpectrumTable(
        periodic=np.array([0.0, 10.0, 11.0]),
        antiperiodic=np.array([-1.0, 2.0, 20.0]),
        periodic_residuals=np.zeros(3),
        antiperiodic_residuals=np.zeros(3),
    )
    with pytest.raises(InterlacingError, match="interlacing broken"):
        check_interlacing(spectrum)


def test_cluster_layout():
    assert _cluster_layout(PERIODIC, 5) == [(0,), (1, 2), (3, 4)]
    assert _cluster_layout(ANTIPERIODIC, 5) == [(0, 1), (2, 3), (4, 5)]


def test_brackets_are_disjoint(two_mode):
    jobs = plan_clusters(two_mode, 6)
    for parity in (PERIODIC, ANTIPERIODIC):
        mine = [j for j in jobs if j.parity == parity]
        for a, b in zip(mine, mine[1:]):
            assert a.hi == pytest.approx(b.lo), "neighbouring brackets must share an end"
        for job in mine:
            assert all(job.lo < g < job.hi for g in job.guesses)


def test_far_seed_still_reaches_edge(mathieu):
    """A seed at the bracket floor converges by Newton steps or the Brent fallback."""
    job = plan_clusters(mathieu, 1)[0]
    far = dataclasses.replace(job, guesses=(job.lo + 1e-3,))
    result = refine_cluster(far)
    exact = galerkin.eigenvalues(mathieu, PERIODIC, 1)[0]
    assert result.values[0] == pytest.approx(exact, abs=1e-8)


def test_parallel_workers_match(two_mode):
    serial = compute_spectrum(two_mode, 3, workers=1)
    parallel = compute_spectrum(two_mode, 3, workers=2)
    assert np.array_equal(serial.periodic, parallel.periodic)
    assert np.array_equal(serial.antiperiodic, parallel.antiperiodic)


def test_count_limits(zero_potential):
    with pytest.raises(ConfigError):
        compute_spectrum(zero_potential, 0)


def test_count_below():
    assert count_below([0.0, 1.0, 2.0, 3.0], 2.0) == 2
