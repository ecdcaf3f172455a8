from __future__ import annotations

from typing import ClassVar

import numpy as np
from scipy.integrate import solve_ivp

from hill_spectra.errors import IntegrationError
from hill_spectra.integrators.base import INITIAL_STATE, Integrator, potential_sampler
from hill_spectra.potential import FourierPotential


class RungeKutta(Integrator):
    """Adaptive embedded Runge–Kutta (DOP853) on the 8-component system."""

    name = "rk"
    order: ClassVar[int] = 8
    adaptive = True

    def propagate(self, q: FourierPotential, lam: float, tol: float) -> np.ndarray:
        sample = potential_sampler(q)

        def rhs(x, s):
            v = sample(x) - lam
            return np.array([
                s[2], s[3], v * s[0], v * s[1],
                s[6], s[7], v * s[4] - s[0], v * s[5] - s[1],
            ])

        sol = solve_ivp(rhs, (0.0, 1.0), INITIAL_STATE, method="DOP853", rtol=tol, atol=tol * 1e-2)
        if not sol.success:
            raise IntegrationError(f"rk integrator failed at λ={lam:.6g}: {sol.message}")
        return sol.y[:, -1]
