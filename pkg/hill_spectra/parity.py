"""Index bookkeeping shared by the periodic and anti-periodic problems.

Periodic eigenvalues pair up as (λ_{2m+1}, λ_{2m+2}) near ((2m+2)π)²;
anti-periodic ones as (μ_{2m}, μ_{2m+1}) near ((2m+1)π)².  Every
asymptotic formula is written in terms of the edge frequency n, so the
anti-periodic variant is the periodic one with 2m+2 replaced by 2m+1.
"""
from __future__ import annotations

import math

from hill_spectra.config import PARITIES
from hill_spectra.errors import ConfigError

PERIODIC = "periodic"
ANTIPERIODIC = "antiperiodic"


def check_parity(parity: str) -> str:
    if parity not in PARITIES:
        raise ConfigError(f"parity must be one of {PARITIES}, got {parity!r}")
    return parity


def sign(parity: str) -> int:
    """Floquet multiplier: Δ(λ) = 2·sign at the eigenvalues of *parity*."""
    return 1 if check_parity(parity) == PERIODIC else -1


def edge_index(m: int, parity: str) -> int:
    if m < 0:
        raise ConfigError(f"pair index must be nonnegative, got {m}")
    return 2 * m + 2 if check_parity(parity) == PERIODIC else 2 * m + 1


def pair_indices(m: int, parity: str) -> tuple[int, int]:
    """Positions of the pair near (nπ)² in the ordered eigenvalue list."""
    n = edge_index(m, parity)
    return n - 1, n


def pair_of_gap(n: int) -> tuple[str, int]:
    """Map instability interval n to (parity, m)."""
    if n < 1:
        raise ConfigError(f"gap index must be positive, got {n}")
    return (PERIODIC, (n - 2) // 2) if n % 2 == 0 else (ANTIPERIODIC, (n - 1) // 2)


def parity_of_level(n: int) -> str:
    """Parity whose spectrum contains the free level (nπ)²."""
    return PERIODIC if n % 2 == 0 else ANTIPERIODIC


def free_level(n: int) -> float:
    return (n * math.pi) ** 2
