"""Shared potentials for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from hill_spectra.potential import FourierPotential, cosine_series, from_coefficients

CUBIC_DEGREE = 24


@pytest.fixture
def zero_potential() -> FourierPotential:
    return FourierPotential(np.zeros(1))


@pytest.fixture
def mathieu() -> FourierPotential:
    """q = 2cos(2πx): c_{±1} = 1."""
    return cosine_series({1: 2.0})


@pytest.fixture
def two_mode() -> FourierPotential:
    """q = 2cos(2πx) + 0.5cos(4πx)."""
    return cosine_series({1: 2.0, 2: 0.5})


@pytest.fixture
def cubic() -> FourierPotential:
    """c_{±n} = n⁻³ for 1 ≤ n ≤ CUBIC_DEGREE."""
    table = {}
    for n in range(1, CUBIC_DEGREE + 1):
        table[n] = table[-n] = float(n) ** -3
    return from_coefficients(table)
