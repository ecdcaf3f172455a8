from __future__ import annotations

from hill_spectra.models import AsymptoticReport, ImplicationReport, UniquenessReport


def build_implication_summary(report: ImplicationReport) -> str:
    lines: list[str] = []

    lines.append(f"# Gap decay vs coefficient decay (n = {report.n_min}..{report.n_max})")
    lines.append("")
    lines.append(f"**Source:** `{report.source}`")
    lines.append("")
    lines.append("| Sequence | Verdict | Tail n²·s_n | Block ratios |")
    lines.append("|----------|---------|------------:|--------------|")
    for name, verdict in (("gaps l_n", report.gaps), ("coefficients |c_n|", report.coeffs)):
        ratios = ", ".join(f"{r:.3g}" for r in verdict.ratios)
        lines.append(f"| {name} | {verdict.classification} | {verdict.tail_statistic:.3e} | {ratios} |")
    lines.append("")
    lines.append(f"- o(n⁻²) implication: **{report.implication}**")
    lines.append(f"- O(n⁻²) implication: **{report.implication_big_o}**")
    lines.append(f"- gap/(2|c_n|) inside window on n ≥ {report.n_min}: **{'yes' if report.ratio_ok else 'no'}**")
    lines.append("")
    if report.ratios:
        lines.append("| n | l_n | \\|c_n\\| | l_n / 2\\|c_n\\| |")
        lines.append("|--:|----:|--------:|---------------:|")
        for r in report.ratios:
            lines.append(f"| {r.n} | {r.gap:.6e} | {r.coeff:.6e} | {r.ratio:.4f} |")
        lines.append("")
    return "\n".join(lines)


def build_uniqueness_summary(report: UniquenessReport) -> str:
    lines: list[str] = []

    lines.append(f"# Free-spectrum recovery check (n0 = {report.n0}, ε = {report.eps:g})")
    lines.append("")
    lines.append(f"**Source:** `{report.source}`")
    lines.append("")
    lines.append(f"- max n²·l_n over n0 < n ≤ 2·n0: {report.worst_scaled_gap:.3e}"
                 f" ({'below' if report.gap_hypothesis else 'not below'} ε)")
    missing = [e.n for e in report.membership if not e.member]
    if missing:
        lines.append(f"- (nπ)² missing from the spectrum for n = {', '.join(map(str, missing))}")
    else:
        lines.append("- every (nπ)² in the window is an eigenvalue")
    lines.append(
        f"- recovered c_0: {report.c0.estimate:.6e} ± {report.c0.tolerance:.2e} (envelope C = {report.c0.envelope:.3g})"
    )
    lines.append(f"- recovered ∫q²: {report.l2norm.estimate:.6e} ± {report.l2norm.tolerance:.2e}")
    lines.append("")
    lines.append(f"**Conclusion:** {report.conclusion}")
    lines.append("")
    return "\n".join(lines)


def build_asymptotic_summary(report: AsymptoticReport) -> str:
    lines: list[str] = []

    lines.append(f"# Pair predictions ({report.parity}, denominators at {report.variant})")
    lines.append("")
    lines.append("| m | measured center | predicted center | gap | 2\\|c_n\\| | m²·resid | budget |")
    lines.append("|--:|----------------:|-----------------:|----:|---------:|---------:|-------:|")
    for r in report.rows:
        center = 0.5 * (r.lambda1 + r.lambda2)
        lines.append(
            f"| {r.m} | {center:.10f} | {r.center_pred:.10f} | {r.gap_meas:.3e}"
            f" | {r.split_pred:.3e} | {r.m2_resid_center:.3e} | {r.budget:.3e} |"
        )
    lines.append("")
    return "\n".join(lines)


def build_summary(report) -> str:
    if isinstance(report, ImplicationReport):
        return build_implication_summary(report)
    if isinstance(report, UniquenessReport):
        return build_uniqueness_summary(report)
    if isinstance(report, AsymptoticReport):
        return build_asymptotic_summary(report)
    raise TypeError(f"no summary for {type(report).__name__}")
