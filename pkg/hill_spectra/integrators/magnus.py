from __future__ import annotations

import math
from typing import ClassVar

import numpy as np
from scipy.linalg import expm

from hill_spectra.integrators.base import Integrator, potential_sampler
from hill_spectra.potential import FourierPotential

MIN_STEPS = 256
CHUNK = 8192
_GAUSS = math.sqrt(3.0) / 6.0


def step_count(lam: float, tol: float) -> int:
    """Uniform steps needed for a 4th-order scheme to reach *tol* at *lam*."""
    return max(MIN_STEPS, math.ceil(0.5 * (1.0 + abs(lam)) ** 0.625 * tol ** -0.25))


def _generators(v: np.ndarray) -> np.ndarray:
    """Stack of 4×4 matrices [[A, 0], [B, A]] with A = [[0, 1], [v, 0]], B = [[0, 0], [−1, 0]]."""
    gen = np.zeros(v.shape + (4, 4))
    gen[..., 0, 1] = 1.0
    gen[..., 1, 0] = v
    gen[..., 2, 3] = 1.0
    gen[..., 3, 2] = v
    gen[..., 3, 0] = -1.0
    return gen


def _ordered_product(steps: np.ndarray) -> np.ndarray:
    """E_{k-1} ··· E_1 E_0 by pairwise reduction."""
    while steps.shape[0] > 1:
        if steps.shape[0] % 2:
            steps = np.concatenate([steps, np.eye(4)[None]], axis=0)
        steps = steps[1::2] @ steps[0::2]
    return steps[0]


class Magnus4(Integrator):
    """Fixed-step fourth-order Magnus scheme, used as the cross-check oracle.

    Each step uses the two-point Gauss rule:
    Ω = h/2 (A1 + A2) + (√3/12) h² [A2, A1].
    """

    name = "magnus"
    order: ClassVar[int] = 4

    def propagate(self, q: FourierPotential, lam: float, tol: float) -> np.ndarray:
        sample = potential_sampler(q)
        n = step_count(lam, tol)
        h = 1.0 / n
        prop = np.eye(4)
        for start in range(0, n, CHUNK):
            x0 = h * np.arange(start, min(start + CHUNK, n))
            a1 = _generators(sample(x0 + h * (0.5 - _GAUSS)) - lam)
            a2 = _generators(sample(x0 + h * (0.5 + _GAUSS)) - lam)
            omega = 0.5 * h * (a1 + a2) + (math.sqrt(3.0) / 12.0) * h * h * (a2 @ a1 - a1 @ a2)
            prop = _ordered_product(expm(omega)) @ prop
        return prop[:, :2].ravel()
