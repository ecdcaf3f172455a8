"""Fourier-Galerkin truncation of the Hill operator.

Periodic problems use the basis e^{i2kπx}, |k| ≤ K; anti-periodic ones
use e^{i(2k+1)πx}, −K ≤ k < K.  In either basis the operator is the
Hermitian matrix A[j, k] = ω_j² δ_jk + c_{j−k}, so a dense Hermitian
eigensolve gives both an independent eigenvalue oracle and the edge
coefficients u, v of the eigenfunctions.
"""
from __future__ import annotations

import logging
import math

import numpy as np
import scipy.linalg

from hill_spectra.errors import ConfigError, EigenSolveError, PairingError
from hill_spectra.models import EdgeCoefficients, EigenpairSet, SpectrumTable, TruncatedOperator
from hill_spectra.parity import ANTIPERIODIC, PERIODIC, check_parity, edge_index, pair_indices
from hill_spectra.potential import FourierPotential

logger = logging.getLogger(__name__)

RESIDUAL_FACTOR = 1e-9
ORTHO_TOL = 1e-10
PHASE_FLOOR = 1e-12


def default_cutoff(index: int, degree: int) -> int:
    """Cutoff K resolving eigenvalue *index* for a degree-*degree* potential."""
    return max(2 * index + 8, degree + 8)


def modes(parity: str, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis labels k and their frequencies ω_k."""
    if check_parity(parity) == PERIODIC:
        ks = np.arange(-cutoff, cutoff + 1)
        return ks, 2.0 * math.pi * ks
    ks = np.arange(-cutoff, cutoff)
    return ks, (2 * ks + 1) * math.pi


def assemble(q: FourierPotential, parity: str, cutoff: int) -> TruncatedOperator:
    if cutoff < q.degree + 2:
        raise ConfigError(f"cutoff {cutoff} is below degree + 2 = {q.degree + 2}")
    ks, freqs = modes(parity, cutoff)
    offsets = np.arange(ks.size)
    matrix = scipy.linalg.toeplitz(q.coefficients(offsets), q.coefficients(-offsets))
    matrix[np.diag_indices_from(matrix)] += freqs**2
    return TruncatedOperator(
        parity=parity, cutoff=cutoff, modes=ks, frequencies=freqs, matrix=matrix, shift=q.mean
    )


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first component above PHASE_FLOOR is real positive."""
    first = np.argmax(np.abs(vectors) > PHASE_FLOOR, axis=0)
    lead = vectors[first, np.arange(vectors.shape[1])]
    return vectors * (np.abs(lead) / lead)[None, :]


def eigen(op: TruncatedOperator, count: int) -> EigenpairSet:
    """Lowest *count* eigenpairs of the truncated operator.

    LAPACK's Householder tridiagonalization with implicit QL iteration
    (``driver="ev"``) does the work; eigenvalues come back ascending.
    """
    if not 1 <= count <= op.dimension:
        raise ConfigError(f"count must lie in [1, {op.dimension}], got {count}")
    try:
        values, vectors = scipy.linalg.eigh(op.matrix, driver="ev")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigenSolveError(f"{op.parity} eigensolve (K={op.cutoff}) did not converge: {e}") from e

    scale = max(1.0, float(np.max(np.abs(values))))
    values, vectors = values[:count], _fix_phase(vectors[:, :count])
    residuals = np.linalg.norm(op.matrix @ vectors - vectors * values[None, :], axis=0)
    if np.any(residuals > RESIDUAL_FACTOR * scale):
        raise EigenSolveError(f"{op.parity} eigenpair residual {residuals.max():.3e} exceeds tolerance")
    gram = vectors.conj().T @ vectors
    if np.max(np.abs(gram - np.eye(count))) > ORTHO_TOL:
        raise EigenSolveError(f"{op.parity} eigenvectors lost orthonormality")
    logger.debug("galerkin %s K=%d: %d eigenpairs, max residual %.2e",
                 op.parity, op.cutoff, count, residuals.max())
    return EigenpairSet(
        parity=op.parity,
        cutoff=op.cutoff,
        modes=op.modes,
        eigenvalues=values,
        vectors=vectors,
        residuals=residuals,
        shift=op.shift,
    )


def eigenvalues(q: FourierPotential, parity: str, count: int, cutoff: int | None = None) -> np.ndarray:
    cutoff = cutoff or default_cutoff(count, q.degree)
    return eigen(assemble(q, parity, cutoff), count).eigenvalues


def spectrum_table(q: FourierPotential, count: int, cutoff: int | None = None) -> SpectrumTable:
    """Galerkin-sourced spectrum usable wherever a Floquet table is."""
    cutoff = cutoff or default_cutoff(count, q.degree)
    per = eigen(assemble(q, PERIODIC, cutoff), count)
    anti = eigen(assemble(q, ANTIPERIODIC, cutoff), count)
    return SpectrumTable(
        periodic=per.eigenvalues,
        antiperiodic=anti.eigenvalues,
        periodic_residuals=per.residuals,
        antiperiodic_residuals=anti.residuals,
        source="galerkin",
    )


def edge_coefficients(pairs: EigenpairSet, m: int) -> EdgeCoefficients:
    """u_{m,j}, v_{m,j} and the tail mass of the two eigenvectors of pair *m*.

    u is the component on e^{inπx} and v the one on e^{−inπx}, n the edge
    frequency; the tail is Σ |component|² over every other mode.
    """
    n = edge_index(m, pairs.parity)
    lo, hi = pair_indices(m, pairs.parity)
    if hi >= pairs.count:
        raise PairingError(f"pair m={m} needs {hi + 1} eigenpairs, have {pairs.count}")
    k_plus = n // 2 if pairs.parity == PERIODIC else m
    k_minus = -k_plus if pairs.parity == PERIODIC else -m - 1
    if k_plus > pairs.modes[-1]:
        raise PairingError(f"cutoff {pairs.cutoff} does not contain the modes of pair m={m}")
    pos_plus = k_plus - pairs.modes[0]
    pos_minus = k_minus - pairs.modes[0]

    us, vs, tails = [], [], []
    for j in (lo, hi):
        theta = pairs.eigenvalues[j] - pairs.shift
        levels = [(k * math.pi) ** 2 for k in (n - 2, n, n + 2) if k >= 0]
        nearest = min(levels, key=lambda level: abs(theta - level))
        if nearest != (n * math.pi) ** 2:
            raise PairingError(
                f"eigenvalue {j} = {pairs.eigenvalues[j]:.6g} is not nearest to ({n}π)²; m={m} is too small"
            )
        vec = pairs.vectors[:, j]
        u, v = complex(vec[pos_plus]), complex(vec[pos_minus])
        if abs(u) ** 2 + abs(v) ** 2 <= 0.5:
            raise PairingError(f"eigenvector {j} carries under half its mass on e^(±i{n}πx)")
        mass = np.abs(vec) ** 2
        tails.append(max(0.0, float(mass.sum() - mass[pos_plus] - mass[pos_minus])))
        us.append(u)
        vs.append(v)
    return EdgeCoefficients(m=m, parity=pairs.parity, u=tuple(us), v=tuple(vs), tails=tuple(tails))
