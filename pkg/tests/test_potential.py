"""Tests for potential: coefficient tables, Parseval, Q and G±, grid ingestion and file I/O."""
from __future__ import annotations

import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from hill_spectra.errors import PotentialError, PotentialFileError
from hill_spectra.potential import (
    FourierPotential,
    antiderivative,
    cosine_series,
    dump_potential,
    evaluate,
    fourier_coefficient,
    from_coefficients,
    g_coefficients,
    g_function,
    ingest_grid,
    l2_norm_squared,
    load_potential,
)


def test_cosine_series_coefficients(mathieu):
    """2cos(2πx) has c_{±1} = 1 and nothing else."""
    assert mathieu.degree == 1
    assert mathieu.coefficient(1) == 1
    assert mathieu.coefficient(-1) == 1
    assert mathieu.coefficient(0) == 0
    assert mathieu.coefficient(5) == 0, "coefficients outside the band must be zero"


def test_from_coefficients_rejects_complex_potential():
    """c_{-1} must be conj(c_1)."""
    with pytest.raises(PotentialError, match="not conj"):
        from_coefficients({1: 1 + 1j, -1: 1 + 1j})


def test_from_coefficients_trims_trailing_zeros():
    q = from_coefficients({0: 1.0, 1: 0.5, -1: 0.5, 3: 0, -3: 0})
    assert q.degree == 1


def test_coefficients_are_read_only(two_mode):
    with pytest.raises(ValueError):
        two_mode.coeffs[0] = 1.0


def test_summary_norms(two_mode):
    assert two_mode.sup_coeff == pytest.approx(1.0)
    assert two_mode.abs_sum == pytest.approx(2.5)
    assert two_mode.mean == 0.0


def test_evaluate_matches_cosines(two_mode):
    xs = np.linspace(0, 1, 17)
    expected = 2 * np.cos(2 * math.pi * xs) + 0.5 * np.cos(4 * math.pi * xs)
    assert np.allclose(evaluate(two_mode, xs), expected, atol=1e-13)
    assert two_mode(0.25) == pytest.approx(-0.5, abs=1e-13)


def test_fourier_coefficient_matches_quadrature(two_mode):
    """c_n = ∫₀¹ q e^{-i2nπx} dx."""
    for n in range(4):
        re, _ = quad(lambda x: two_mode(x) * math.cos(2 * math.pi * n * x), 0, 1, limit=200)
        im, _ = quad(lambda x: -two_mode(x) * math.sin(2 * math.pi * n * x), 0, 1, limit=200)
        assert fourier_coefficient(two_mode, n) == pytest.approx(complex(re, im), abs=1e-12), f"c_{n}"


def test_l2_norm_parseval(two_mode):
    """∫q² from Parseval equals the quadrature value."""
    exact, _ = quad(lambda x: two_mode(x) ** 2, 0, 1, limit=200)
    assert l2_norm_squared(two_mode) == pytest.approx(exact, rel=1e-12)
    assert l2_norm_squared(two_mode) == pytest.approx(2.125)


def test_antiderivative_matches_quadrature():
    q = cosine_series({1: 2.0, 3: -1.0}, constant=0.7)
    table = antiderivative(q)
    for x in (0.0, 0.1, 0.37, 0.5, 0.9, 1.0):
        expected, _ = quad(q, 0, x)
        assert table(x) == pytest.approx(expected, abs=1e-12), f"Q({x})"
    mean, _ = quad(table, 0, 1)
    assert table.mean.real == pytest.approx(mean, abs=1e-12)


def test_g_coefficients_index_set(mathieu):
    """For n = 2 and M = 1 only m1 with |m1 + 2| ≤ 1 appear."""
    table = g_coefficients(mathieu, 0, +1)
    assert set(table) == {-3, -2, -1}
    assert table[-2] == 0
    assert table[-1] == pytest.approx(1 / (1j * 2 * math.pi * -1))


def g_by_quadrature(q: FourierPotential, n: int, sign: int, x: float) -> complex:
    """∫₀ˣ q(t) e^{∓i2nπt} dt − c_{±n}·x, integrated directly."""
    opts = {"epsabs": 1e-14, "epsrel": 1e-12, "limit": 200}
    re, _ = quad(lambda t: evaluate(q, t) * math.cos(2 * math.pi * n * t), 0, x, **opts)
    im, _ = quad(lambda t: -sign * evaluate(q, t) * math.sin(2 * math.pi * n * t), 0, x, **opts)
    return complex(re, im) - q.coefficient(sign * n) * x


@pytest.mark.parametrize("m", [0, 1, 3])
@pytest.mark.parametrize("sign", [1, -1])
def test_g_coefficients_match_projection(two_mode, m, sign):
    """Projecting the integrated G± onto e^{i2m1πx} reproduces the coefficient table."""
    points = 32
    xs = np.arange(points) / points
    n = 2 * m + 2
    values = np.array([g_by_quadrature(two_mode, n, sign, x) for x in xs])
    table = g_coefficients(two_mode, m, sign)
    for m1 in range(-12, 13):
        if m1 == 0:
            continue
        projected = np.mean(values * np.exp(-2j * math.pi * m1 * xs))
        assert projected == pytest.approx(table.get(m1, 0j), abs=1e-9), f"G{sign:+d}_{m1} for m={m}"


def test_g_function_vanishes_at_endpoints(two_mode):
    for sign in (1, -1):
        for m in (0, 3):
            assert abs(g_function(two_mode, m, sign, 0.0)) < 1e-14
            assert abs(g_function(two_mode, m, sign, 1.0)) < 1e-13


def test_ingest_grid_recovers_coefficients():
    x = np.arange(16) / 16
    q = ingest_grid(2 * np.cos(2 * math.pi * x) + 0.5 * np.cos(4 * math.pi * x))
    assert q.degree == 2, "round-off modes must be chopped"
    assert q.coefficient(1) == pytest.approx(1.0, abs=1e-14)
    assert q.coefficient(2) == pytest.approx(0.25, abs=1e-14)


def test_ingest_grid_needs_power_of_two():
    with pytest.raises(PotentialError, match="power of two"):
        ingest_grid(np.ones(12))


def test_load_missing_file(tmp_path):
    with pytest.raises(PotentialFileError, match="cannot read potential file"):
        load_potential(tmp_path / "missing.cfg")


def test_load_rejects_unknown_kind(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(json.dumps({"kind": "table"}), encoding="utf-8")
    with pytest.raises(PotentialFileError, match="'kind'"):
        load_potential(path)


def test_dump_then_load(tmp_path, two_mode):
    path = dump_potential(two_mode, tmp_path / "two_mode.cfg")
    loaded = load_potential(path)
    assert np.array_equal(loaded.coeffs, two_mode.coeffs)


def test_load_samples(tmp_path):
    path = tmp_path / "samples.cfg"
    samples = [3.0 + 2 * math.cos(2 * math.pi * j / 8) for j in range(8)]
    path.write_text(json.dumps({"kind": "samples", "samples": samples}), encoding="utf-8")
    q = load_potential(path)
    assert q.mean == pytest.approx(3.0)
    assert q.coefficient(1) == pytest.approx(1.0)


def test_shifted_and_without_mean(mathieu):
    shifted = mathieu.shifted(3.0)
    assert shifted.mean == 3.0
    assert isinstance(shifted.without_mean(), FourierPotential)
    assert shifted.without_mean().mean == 0.0
