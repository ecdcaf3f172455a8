"""Tests for asymptotics: correction sums, identities, pair predictions and recoveries."""
from __future__ import annotations

import math

import pytest

from hill_spectra import corpus, floquet, galerkin
from hill_spectra.asymptotics import (
    DenominatorContext,
    a1_closed_form,
    a1_sum,
    a2_sum,
    admissible_indices,
    asymptotic_report,
    b1_integral_form,
    b_sums,
    correction_sweep,
    corrections,
    predict_pair,
    recover_c0,
    recover_l2norm,
    remainder_budget,
    s1_removed,
    s_identities,
)
from hill_spectra.errors import BookkeepingError, DegenerateDenominatorError, PotentialError
from hill_spectra.models import CorrectionSet
from hill_spectra.parity import ANTIPERIODIC, PERIODIC, edge_index
from hill_spectra.potential import cosine_series, l2_norm_squared, load_potential

PI2 = math.pi**2


def test_denominators_at_free_level():
    """D(s) = 4π²·s·(n − s) at λ = (nπ)²."""
    ctx = DenominatorContext.at_unperturbed(3, PERIODIC, 2)
    assert ctx.n == 8
    for s in (-2, -1, 1, 2, 7, 9):
        assert float(ctx.shift(s)) == pytest.approx(4 * PI2 * s * (8 - s))


def test_context_rejects_far_eigenvalue():
    with pytest.raises(DegenerateDenominatorError, match="pairing window"):
        DenominatorContext.at_eigenvalue(3, PERIODIC, 36 * PI2, 1, 2)


def test_forbidden_indices_removed(two_mode):
    ctx = DenominatorContext.at_unperturbed(0, PERIODIC, two_mode.degree)
    (m1,) = admissible_indices(two_mode, ctx, 0, order=1, primed=False)
    assert 0 not in m1 and 2 not in m1
    m1, p = admissible_indices(two_mode, ctx, 0, order=2, primed=False)
    assert not set(p.tolist()) & {0, 2}
    assert max(abs(p - m1)) <= two_mode.degree


def test_a1_for_pure_cosine(mathieu):
    """a1 = 2/(4π²(n² − 1)) exactly for 2cos(2πx)."""
    for parity in (PERIODIC, ANTIPERIODIC):
        ctx = DenominatorContext.at_unperturbed(10, parity, 1)
        n = ctx.n
        assert a1_sum(mathieu, ctx) == pytest.approx(2 / (4 * PI2 * (n * n - 1)), rel=1e-13)


def test_a1_closed_form_value(mathieu):
    assert a1_closed_form(mathieu, 10) == pytest.approx(2 / (2 * math.pi * 22) ** 2)


def test_a2_vanishes_for_pure_cosine(mathieu):
    """No index triple is admissible when only c_{±1} are nonzero."""
    for m in (2, 5, 20):
        ctx = DenominatorContext.at_unperturbed(m, PERIODIC, 1)
        assert a2_sum(mathieu, ctx) == 0


def test_primed_sums_agree(two_mode):
    for parity in (PERIODIC, ANTIPERIODIC):
        for m in (0, 3, 9):
            c = corrections(two_mode, m, parity)
            assert c.a1p == pytest.approx(c.a1, rel=1e-12, abs=1e-15)
            assert c.a2p == pytest.approx(c.a2, rel=1e-12, abs=1e-15)


def test_b1_matches_antiderivative_form(two_mode):
    for m in (0, 1, 4):
        ctx = DenominatorContext.at_unperturbed(m, PERIODIC, two_mode.degree)
        b1, _ = b_sums(two_mode, ctx)
        assert b1 == pytest.approx(b1_integral_form(two_mode, m), rel=1e-12, abs=1e-15)


def test_b_sums_vanish_beyond_double_bandwidth(two_mode):
    """c_{m1}c_{n−m1} needs n ≤ 2M; the second-order numerator needs n ≤ 3M."""
    ctx = DenominatorContext.at_unperturbed(3, PERIODIC, two_mode.degree)
    assert b_sums(two_mode, ctx) == (0, 0)


def test_s_identities_reproduce_a2(two_mode):
    for m in (1, 3, 6):
        s = s_identities(two_mode, m)
        n = 2 * m + 2
        ctx = DenominatorContext.at_unperturbed(m, PERIODIC, two_mode.degree)
        assert sum(s) / ((2 * math.pi) ** 4 * n * n) == pytest.approx(a2_sum(two_mode, ctx), rel=1e-12)
        assert abs(s[0]) < 1e-12, "S1 vanishes once n exceeds the degree"


def test_identities_need_zero_mean():
    q = cosine_series({1: 2.0}, constant=1.0)
    with pytest.raises(PotentialError, match="c_0 = 0"):
        s_identities(q, 3)
    with pytest.raises(PotentialError):
        a1_closed_form(q, 3)


def test_predict_pair_rejects_imaginary_shift(mathieu):
    bad = CorrectionSet(
        m=3, parity=PERIODIC, variant="unperturbed", lam=64 * PI2,
        a1=1e-3j, a2=0j, b1=0j, b2=0j, a1p=0j, a2p=0j, b1p=0j, b2p=0j, budget=0.1,
    )
    with pytest.raises(BookkeepingError, match="imaginary"):
        predict_pair(mathieu, 3, bad)


def test_predictions_track_galerkin(two_mode):
    """Center residuals stay inside the (ln m/m)³ budget and shrink like m⁻²."""
    spectrum = galerkin.spectrum_table(two_mode, 2 * 16 + 3)
    report = asymptotic_report(two_mode, spectrum, (8, 16))
    assert [r.m for r in report.rows] == list(range(8, 17))
    for row in report.rows:
        assert abs(row.resid_center) < row.budget, f"m={row.m}: center residual {row.resid_center:.2e}"
        assert abs(row.resid_gap) < row.budget, f"m={row.m}: gap residual {row.resid_gap:.2e}"
    assert report.source == "galerkin"


def test_eigenvalue_variant(two_mode):
    spectrum = galerkin.spectrum_table(two_mode, 2 * 10 + 3)
    report = asymptotic_report(two_mode, spectrum, (6, 10), variant="eigenvalue")
    for row in report.rows:
        assert abs(row.resid_center) < row.budget


def test_recover_c0_for_shifted_cosine():
    q = cosine_series({1: 2.0}, constant=3.0)
    spectrum = galerkin.spectrum_table(q, 2 * 16 + 3)
    result = recover_c0(spectrum, (4, 16))
    assert result.estimate == pytest.approx(3.0, abs=1e-3)
    assert result.ms == tuple(range(4, 17))


def test_recover_l2norm_for_mathieu(mathieu):
    """(2πn)²·a1 = 2n²/(n² − 1) → ∫q² = 2."""
    spectrum = galerkin.spectrum_table(mathieu, 2 * 16 + 3)
    result = recover_l2norm(spectrum, 0.0, (8, 16))
    n = 34
    assert result.estimate == pytest.approx(2 * n * n / (n * n - 1), rel=1e-4)
    assert result.estimate == pytest.approx(2.0, abs=1e-2)


def test_correction_sweep_two_mode(two_mode):
    rows = correction_sweep(two_mode, [8, 16, 32, 64])
    defects = [r.m2_a1_defect for r in rows]
    a2s = [r.m2_a2 for r in rows]
    assert all(a > b for a, b in zip(defects, defects[1:])), f"m²|a1 − closed form| not decreasing: {defects}"
    assert all(a > b for a, b in zip(a2s, a2s[1:])), f"m²|a2| not decreasing: {a2s}"
    for r in rows:
        assert r.s1 < 1e-12


def test_correction_sweep_pure_cosine(mathieu):
    """No index triple is admissible for one cosine, so a2 is identically zero."""
    rows = correction_sweep(mathieu, [8, 16, 32, 64])
    defects = [r.m2_a1_defect for r in rows]
    assert all(a > b for a, b in zip(defects, defects[1:])), f"m²|a1 − closed form| not decreasing: {defects}"
    assert all(r.m2_a2 == 0 for r in rows)


def test_remainder_budget():
    assert remainder_budget(8) == pytest.approx((math.log(8) / 8) ** 3)
    with pytest.raises(ValueError):
        remainder_budget(1)


def test_s1_vanishes_on_zero_mean_corpus(tmp_path):
    """S1 plus the forbidden-index terms is 4π²∫(Q − Q_0)²q = 0; past the degree nothing is forbidden."""
    checked = []
    for path in corpus.write_corpus(tmp_path, seed=1):
        if path.suffix != ".cfg":
            continue
        q = load_potential(path)
        if abs(q.mean) > 1e-12:
            continue
        checked.append(path.stem)
        for m in (2, 8, 16, 32):
            s1 = s_identities(q, m)[0]
            removed = s1_removed(q, m)
            assert abs(s1 + removed) <= 1e-10, f"{path.stem}, m={m}: S1 + removed = {abs(s1 + removed):.2e}"
            if edge_index(m, PERIODIC) > q.degree:
                assert removed == 0
                assert abs(s1) <= 1e-10, f"{path.stem}, m={m}: |S1| = {abs(s1):.2e}"
    assert {"zero", "two_mode", "random_1", "power_3"} <= set(checked)


def test_s1_removed_terms_matter_below_the_degree(cubic):
    """For n ≤ M the forbidden index drops real contributions."""
    assert abs(s1_removed(cubic, 4)) > 1e-10
    assert s1_removed(cubic, 20) == 0


def test_recover_c0_over_moderate_range():
    q = cosine_series({1: 2.0}, constant=3.0)
    spectrum = galerkin.spectrum_table(q, 2 * 40 + 3)
    result = recover_c0(spectrum, (20, 40))
    assert result.estimate == pytest.approx(3.0, abs=0.1)
    assert result.estimate == pytest.approx(3.0, abs=1e-6), "the second-order shift is fitted out"
    for m, offset in zip(result.ms, result.estimates):
        assert abs(offset - result.estimate) <= result.envelope * math.log(m) / m + 1e-15
    assert result.gain >= 1


def test_l2norm_uses_recovered_c0(mathieu):
    """Feeding the fitted c_0 back keeps ∫q² near 2; a plain average of offsets would not."""
    spectrum = galerkin.spectrum_table(mathieu, 2 * 16 + 3)
    c0 = recover_c0(spectrum, (8, 15))
    assert c0.estimate == pytest.approx(0.0, abs=1e-6)
    l2 = recover_l2norm(spectrum, c0.estimate, (8, 15))
    assert l2.estimate == pytest.approx(l2_norm_squared(mathieu), rel=0.02)
    assert l2.gain == pytest.approx((2 * math.pi * 32) ** 2)


def test_l2norm_improves_over_dyadic_sweep(mathieu):
    spectrum = galerkin.spectrum_table(mathieu, 2 * 32 + 3)
    errors = [abs(recover_l2norm(spectrum, 0.0, (m, m)).estimate - 2.0) for m in (4, 8, 16, 32)]
    assert errors[-1] < 0.2, "within 10% by m = 30"
    assert all(a > b for a, b in zip(errors, errors[1:])), f"∫q² error not shrinking: {errors}"


@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_pair_splitting_follows_the_edge_coefficient(eps):
    """2cos(2πx) + ε·cos(2·22πx): the m = 10 pair splits by 2|c_22| = ε."""
    m = 10
    q = cosine_series({1: 2.0, 22: eps})
    gap = floquet.gap_table(galerkin.spectrum_table(q, 2 * m + 3)).entry(2 * m + 2).length
    assert 0.5 * eps <= gap <= 1.5 * eps
    assert gap == pytest.approx(predict_pair(q, m, corrections(q, m)).splitting, rel=1e-3)
