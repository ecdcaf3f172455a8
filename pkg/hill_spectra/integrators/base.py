from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, ClassVar

import numpy as np

from hill_spectra.config import WRONSKIAN_WARN
from hill_spectra.errors import IntegrationError
from hill_spectra.models import FloquetState
from hill_spectra.potential import FourierPotential

logger = logging.getLogger(__name__)

# [y1, y2, y1', y2', z1, z2, z1', z2'] at x = 0
INITIAL_STATE = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])


def potential_sampler(q: FourierPotential) -> Callable:
    """Fast real evaluation of q for scalar or array x.

    Uses q(x) = c_0 + Σ_{k≥1} 2(Re c_k cos 2πkx − Im c_k sin 2πkx).
    """
    c0 = q.mean
    if q.degree == 0:
        return lambda x: c0 + 0.0 * np.asarray(x, dtype=float)
    freqs = 2.0 * math.pi * np.arange(1, q.degree + 1)
    re = 2.0 * q.coeffs[1:].real
    im = 2.0 * q.coeffs[1:].imag

    def sample(x):
        theta = np.multiply.outer(x, freqs)
        return c0 + np.cos(theta) @ re - np.sin(theta) @ im

    return sample


class Integrator(ABC):
    """Base class for Floquet integrators.

    Subclasses set ``name`` and ``order`` and implement :meth:`propagate`,
    which carries the fundamental system and its λ-sensitivity from x = 0
    to x = 1.  Validation and ``FloquetState`` construction are automatic.
    """

    name: ClassVar[str]
    order: ClassVar[int]
    adaptive: ClassVar[bool] = False

    @abstractmethod
    def propagate(self, q: FourierPotential, lam: float, tol: float) -> np.ndarray:
        """Return [y1, y2, y1', y2', z1, z2, z1', z2'] at x = 1."""

    def integrate(self, q: FourierPotential, lam: float, tol: float) -> FloquetState:
        """Propagate, wrap in a ``FloquetState`` and validate. Do not override."""
        lam = float(lam)
        try:
            raw = self.propagate(q, lam, tol)
        except IntegrationError:
            raise
        except (ValueError, ArithmeticError) as e:
            logger.error("  [%s] λ=%.6g: %s", self.name, lam, e)
            raise IntegrationError(f"{self.name} integrator failed at λ={lam:.6g}: {e}") from e
        if not np.all(np.isfinite(raw)):
            raise IntegrationError(f"{self.name} integrator produced non-finite values at λ={lam:.6g}")
        y1, y2, dy1, dy2, z1, z2, dz1, dz2 = (float(v) for v in raw)
        state = FloquetState(lam, y1, dy1, y2, dy2, z1, dz1, z2, dz2, method=self.name)
        if state.wronskian_defect > WRONSKIAN_WARN:
            logger.warning(
                "  [%s] λ=%.6g: Wronskian defect %.2e", self.name, lam, state.wronskian_defect
            )
        return state
