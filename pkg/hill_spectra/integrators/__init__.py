from __future__ import annotations

from .base import Integrator
from .magnus import Magnus4
from .runge_kutta import RungeKutta

INTEGRATORS: dict[str, Integrator] = {
    i.name: i for i in (RungeKutta(), Magnus4())
}
