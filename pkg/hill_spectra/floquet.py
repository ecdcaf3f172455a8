"""Floquet discriminant, band-edge eigenvalues and instability intervals.

Periodic eigenvalues are the roots of Δ(λ) = 2 and anti-periodic ones the
roots of Δ(λ) = −2, where Δ = y1(1) + y2'(1).  Near a small gap these roots
are nearly double, so refinement never iterates on Δ ∓ 2 directly:
Galerkin eigenvalues seed each cluster and Newton steps come from the
linearized monodromy pencil det(Y − sI + tZ) = 0, which stays well
conditioned when Δ ∓ 2 is tangent to zero.  Steps that leave the cluster's
bracket fall back to Brent's method.
"""
from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from hill_spectra import galerkin
from hill_spectra.config import (
    CLUSTER_TOL,
    INTEGRATOR_TOL,
    MAX_COUNT,
    MAX_NEWTON,
    REFINE_TOL,
)
from hill_spectra.errors import ConfigError, InterlacingError, RootFindingError
from hill_spectra.integrators import INTEGRATORS
from hill_spectra.models import FloquetState, GapEntry, GapTable, SpectrumTable
from hill_spectra.parity import ANTIPERIODIC, PERIODIC, pair_indices, pair_of_gap, sign
from hill_spectra.potential import FourierPotential
from hill_spectra.runner import refine_clusters

logger = logging.getLogger(__name__)

ROOT_COUNT_MARGIN = 16


@dataclass(frozen=True)
class ClusterJob:
    """One isolated eigenvalue or one pair, with its bracket (lo, hi)."""

    q: FourierPotential
    parity: str
    first: int
    guesses: tuple[float, ...]
    lo: float
    hi: float
    tol: float = REFINE_TOL
    integrator_tol: float = INTEGRATOR_TOL
    method: str = "rk"

    @property
    def label(self) -> str:
        symbol = "λ" if self.parity == PERIODIC else "μ"
        last = self.first + len(self.guesses) - 1
        return f"{symbol}{self.first}" if last == self.first else f"{symbol}{self.first}..{symbol}{last}"


@dataclass(frozen=True)
class ClusterResult:
    parity: str
    first: int
    values: tuple[float, ...]
    residuals: tuple[float, ...]
    evaluations: int
    bisected: bool = False


def integrate_floquet(
    q: FourierPotential, lam: float, tol: float = INTEGRATOR_TOL, method: str = "rk"
) -> FloquetState:
    if not 1e-14 < tol < 1e-4:
        raise ConfigError(f"integrator tolerance must lie in (1e-14, 1e-4), got {tol}")
    try:
        integrator = INTEGRATORS[method]
    except KeyError:
        raise ConfigError(f"unknown integrator {method!r}; choose from {sorted(INTEGRATORS)}") from None
    return integrator.integrate(q, lam, tol)


def discriminant(q: FourierPotential, lam: float, tol: float = INTEGRATOR_TOL, method: str = "rk") -> float:
    return integrate_floquet(q, lam, tol, method).discriminant


def discriminant_derivative(
    q: FourierPotential, lam: float, tol: float = INTEGRATOR_TOL, method: str = "rk"
) -> float:
    return integrate_floquet(q, lam, tol, method).discriminant_derivative


def pencil_roots(state: FloquetState, parity: str) -> np.ndarray:
    """Real parts of the roots t of det(Y − sI + tZ) = 0, ascending.

    det(Y(μ) − sI) = 2 − sΔ(μ) because det Y = 1, and Y(λ + t) ≈ Y + tZ,
    so each root is a Newton step toward an eigenvalue of *parity*.
    """
    shifted = state.monodromy() - sign(parity) * np.eye(2)
    roots = scipy.linalg.eigvals(shifted, -state.sensitivity())
    roots = roots[np.isfinite(roots)]
    return np.sort(roots.real)


def _pick(roots: np.ndarray, member: str) -> float | None:
    if roots.size == 0:
        return None
    if member == "lower":
        return float(roots[0])
    if member == "upper":
        return float(roots[-1])
    return float(roots[np.argmin(np.abs(roots))])


def _newton(job: ClusterJob, guess: float, member: str) -> tuple[tuple[float, float] | None, int]:
    """Pencil Newton from *guess*; the residual returned is |Δ ∓ 2| at the accepted root."""
    target = 2.0 * sign(job.parity)
    lam = guess
    converged = False
    for evaluations in range(1, MAX_NEWTON + 2):
        state = integrate_floquet(job.q, lam, job.integrator_tol, job.method)
        residual = abs(state.discriminant - target)
        if converged:
            return (lam, residual), evaluations
        step = _pick(pencil_roots(state, job.parity), member)
        if step is None or not job.lo < lam + step < job.hi:
            return None, evaluations
        converged = abs(step) <= job.tol * (1.0 + abs(lam))
        lam += step
    return None, MAX_NEWTON + 1


def _bisect(job: ClusterJob, a: float, b: float) -> tuple[tuple[float, float] | None, int]:
    target = 2.0 * sign(job.parity)

    def f(lam: float) -> float:
        return discriminant(job.q, lam, job.integrator_tol, job.method) - target

    fa, fb = f(a), f(b)
    if fa == 0.0:
        return (a, 0.0), 2
    if fb == 0.0:
        return (b, 0.0), 2
    if fa * fb > 0:
        return None, 2
    xtol = 1e-2 * job.tol * (1.0 + max(abs(a), abs(b)))
    root, info = brentq(f, a, b, xtol=xtol, maxiter=200, full_output=True, disp=False)
    if not info.converged:
        return None, 2 + info.function_calls
    return (root, abs(f(root))), 3 + info.function_calls


def refine_cluster(job: ClusterJob) -> ClusterResult:
    """Refine one cluster; picklable so it can run in a worker process."""
    members = ("nearest",) if len(job.guesses) == 1 else ("lower", "upper")
    found: list[tuple[float, float] | None] = []
    evaluations = 0
    for guess, member in zip(job.guesses, members):
        hit, spent = _newton(job, guess, member)
        found.append(hit)
        evaluations += spent

    bisected = any(hit is None for hit in found)
    if bisected:
        logger.debug("  %s: Newton left the bracket, bisecting", job.label)
        if len(found) == 1:
            found[0], spent = _bisect(job, job.lo, job.hi)
            evaluations += spent
            if found[0] is None:
                raise RootFindingError(f"{job.label}: no sign change in ({job.lo:.10g}, {job.hi:.10g})")
        else:
            center = 0.5 * (job.guesses[0] + job.guesses[1])
            sides = ((job.lo, center), (center, job.hi))
            for i, (a, b) in enumerate(sides):
                if found[i] is None:
                    found[i], spent = _bisect(job, a, b)
                    evaluations += spent
            if any(hit is None for hit in found):
                # no sign change: the gap is closed at this resolution
                residual = abs(discriminant(job.q, center, job.integrator_tol, job.method) - 2.0 * sign(job.parity))
                found = [(center, residual), (center, residual)]

    found.sort(key=lambda hit: hit[0])
    values = [hit[0] for hit in found]
    residuals = [hit[1] for hit in found]
    for v in values:
        if not job.lo < v < job.hi:
            raise RootFindingError(f"{job.label}: root {v:.10g} escaped its bracket ({job.lo:.10g}, {job.hi:.10g})")
    return ClusterResult(
        parity=job.parity,
        first=job.first,
        values=tuple(values),
        residuals=tuple(residuals),
        evaluations=evaluations,
        bisected=bisected,
    )


def _cluster_layout(parity: str, count: int) -> list[tuple[int, ...]]:
    """Index groups covering the first *count* eigenvalues, pairs completed."""
    groups: list[tuple[int, ...]] = [(0,)] if parity == PERIODIC else []
    start = 1 if parity == PERIODIC else 0
    while start < count:
        groups.append((start, start + 1))
        start += 2
    return groups


def plan_clusters(
    q: FourierPotential,
    count: int,
    *,
    tol: float = REFINE_TOL,
    integrator_tol: float = INTEGRATOR_TOL,
    method: str = "rk",
) -> list[ClusterJob]:
    """Seed and bracket every cluster from Galerkin eigenvalues.

    Bracket ends sit halfway to the neighbouring clusters of the same
    parity; below the first cluster the bound min(0, −2Σ|c_m|) − 1 lies
    under the whole spectrum.
    """
    floor = min(0.0, -2.0 * q.abs_sum) - 1.0
    cutoff = galerkin.default_cutoff(count + 3, q.degree)
    jobs: list[ClusterJob] = []
    for parity in (PERIODIC, ANTIPERIODIC):
        seeds = galerkin.eigenvalues(q, parity, count + 3, cutoff)
        groups = _cluster_layout(parity, count)
        for i, group in enumerate(groups):
            first, last = group[0], group[-1]
            lo = floor if i == 0 else 0.5 * (seeds[groups[i - 1][-1]] + seeds[first])
            hi = 0.5 * (seeds[last] + seeds[last + 1])
            jobs.append(
                ClusterJob(
                    q=q,
                    parity=parity,
                    first=first,
                    guesses=tuple(float(seeds[k]) for k in group),
                    lo=float(lo),
                    hi=float(hi),
                    tol=tol,
                    integrator_tol=integrator_tol,
                    method=method,
                )
            )
    return jobs


def compute_spectrum(
    q: FourierPotential,
    count: int,
    tol: float = REFINE_TOL,
    *,
    integrator_tol: float = INTEGRATOR_TOL,
    cluster_tol: float = CLUSTER_TOL,
    method: str = "rk",
    workers: int | None = None,
) -> SpectrumTable:
    """First *count* periodic and anti-periodic eigenvalues, interlacing checked."""
    if not 1 <= count <= MAX_COUNT:
        raise ConfigError(f"count must lie in [1, {MAX_COUNT}], got {count}")
    if not tol > 0 or not cluster_tol > 0:
        raise ConfigError("tolerances must be positive")
    jobs = plan_clusters(q, count, tol=tol, integrator_tol=integrator_tol, method=method)
    logger.info("Refining %d clusters (count=%d, method=%s)", len(jobs), count, method)
    results = asyncio.run(refine_clusters(jobs, refine_cluster, workers))

    values = {PERIODIC: [], ANTIPERIODIC: []}
    residuals = {PERIODIC: [], ANTIPERIODIC: []}
    for result in sorted(results, key=lambda r: (r.parity, r.first)):
        values[result.parity].extend(result.values)
        residuals[result.parity].extend(result.residuals)

    table = SpectrumTable(
        periodic=np.array(values[PERIODIC][:count]),
        antiperiodic=np.array(values[ANTIPERIODIC][:count]),
        periodic_residuals=np.array(residuals[PERIODIC][:count]),
        antiperiodic_residuals=np.array(residuals[ANTIPERIODIC][:count]),
        source="floquet",
    )
    check_interlacing(table, cluster_tol)
    check_root_count(q, table)
    return table


def _interlacing_order(count: int) -> list[tuple[str, int, bool]]:
    """(parity, index, strict-after-previous) along λ0 < μ0 ≤ μ1 < λ1 ≤ λ2 < μ2 ≤ …"""
    order = [(PERIODIC, 0, True)]
    k = 0
    while True:
        block = [(ANTIPERIODIC, 2 * k, True), (ANTIPERIODIC, 2 * k + 1, False),
                 (PERIODIC, 2 * k + 1, True), (PERIODIC, 2 * k + 2, False)]
        for entry in block:
            if entry[1] >= count:
                return order
            order.append(entry)
        k += 1


def check_interlacing(table: SpectrumTable, cluster_tol: float = CLUSTER_TOL) -> None:
    order = _interlacing_order(table.count)
    prev = None
    for parity, index, strict in order:
        value = float(table.eigenvalues(parity)[index])
        if prev is not None:
            slack = cluster_tol * (1.0 + abs(prev[2]))
            ok = value - prev[2] > slack if strict else value - prev[2] >= -slack
            if not ok:
                rel = "<" if strict else "≤"
                raise InterlacingError(
                    f"interlacing broken: {prev[0]}[{prev[1]}] = {prev[2]:.12g} {rel} "
                    f"{parity}[{index}] = {value:.12g} does not hold"
                )
        prev = (parity, index, value)


def gap_table(spectrum: SpectrumTable, cluster_tol: float = CLUSTER_TOL) -> GapTable:
    """l_{2m+1} = μ_{2m+1} − μ_{2m} and l_{2m+2} = λ_{2m+2} − λ_{2m+1}.

    Edges closer than cluster_tol·(1+|λ|) report a closed gap (length 0);
    the edges themselves stay as refined.
    """
    entries: list[GapEntry] = []
    n = 1
    while True:
        parity, m = pair_of_gap(n)
        lo, hi = pair_indices(m, parity)
        values = spectrum.eigenvalues(parity)
        if hi >= values.size:
            break
        left, right = float(values[lo]), float(values[hi])
        length = right - left
        if abs(length) < cluster_tol * (1.0 + abs(right)):
            length = 0.0
        entries.append(GapEntry(n=n, left=left, right=right, length=length))
        n += 1
    return GapTable(entries)


def count_below(values, bound: float) -> int:
    return int(np.count_nonzero(np.asarray(values) < bound))


def check_root_count(q: FourierPotential, table: SpectrumTable) -> None:
    """Compare eigenvalue counts below every cluster boundary against a finer Galerkin solve.

    The reference uses a larger cutoff than the seeds, so a cluster whose
    roots landed on a neighbour or whose seeds were under-resolved shows up
    as a count mismatch.
    """
    for parity in (PERIODIC, ANTIPERIODIC):
        values = table.eigenvalues(parity)
        size = values.size
        cutoff = galerkin.default_cutoff(size + 3, q.degree) + ROOT_COUNT_MARGIN
        reference = galerkin.eigenvalues(q, parity, size + 3, cutoff)
        for group in _cluster_layout(parity, size)[1:]:
            first = group[0]
            bound = 0.5 * (reference[first - 1] + reference[first])
            found = count_below(values, bound)
            if found != first:
                raise RootFindingError(
                    f"{parity}: {found} eigenvalues below {bound:.10g}, Galerkin counts {first}; a root was missed"
                )
