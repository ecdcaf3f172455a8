"""``hillspec`` command line: one subcommand per pipeline.

Exit codes: 0 ran and verified, 1 bad input (``DomainError``),
2 a verification failed (``VerificationError``).
"""
from __future__ import annotations

import argparse
import logging
import time
from datetime import datetime, timezone
from pathlib import Path

from hill_spectra import asymptotics, corpus, decay, floquet, galerkin, outputs
from hill_spectra.config import (
    CLUSTER_TOL,
    DECAY_GROWTH,
    DECAY_RHO,
    DECAY_TAU_ABS,
    INTEGRATOR_TOL,
    METHODS,
    PARITIES,
    REFINE_TOL,
    SOURCES,
    VARIANTS,
    VERSION,
    RunConfig,
    worker_count,
)
from hill_spectra.errors import ConfigError, DomainError, VerificationError
from hill_spectra.models import DecayThresholds, ResultBundle, SpectrumTable
from hill_spectra.potential import FourierPotential, load_potential
from hill_spectra.report_builder import build_summary

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Usage errors become ``ConfigError`` so they share exit code 1."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _m_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M_MIN:M_MAX, got {text!r}") from None
    return lo, hi


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", required=True, help="potential file (JSON, kind coeffs|samples)")
    p.add_argument("--tol", type=float, default=REFINE_TOL, help="eigenvalue refinement tolerance")
    p.add_argument("--integrator-tol", type=float, default=INTEGRATOR_TOL)
    p.add_argument("--cluster-tol", type=float, default=CLUSTER_TOL)
    p.add_argument("--method", choices=METHODS, default="rk")
    p.add_argument("--source", choices=SOURCES, default="floquet")
    p.add_argument("--workers", type=int, default=None, help="worker cap (default: $HILLSPEC_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hillspec", description="Spectral toolkit for the Hill operator −y″ + q y.")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("spectrum", "periodic and anti-periodic eigenvalues"), ("gaps", "gap lengths l_n")):
        p = sub.add_parser(name, help=help_text)
        _solver_flags(p)
        p.add_argument("--count", type=int, default=20)
        p.add_argument("--out")

    p = sub.add_parser("coeffs", help="Fourier coefficients c_0..c_N")
    p.add_argument("--potential", required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--out")

    p = sub.add_parser("galerkin", help="eigenvalues of the Fourier truncation")
    p.add_argument("--potential", required=True)
    p.add_argument("--parity", choices=PARITIES, default="periodic")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--out")

    p = sub.add_parser("asym", help="measured pairs against the second-order predictions")
    _solver_flags(p)
    p.add_argument("--m-range", type=_m_range, default=(8, 64))
    p.add_argument("--parity", choices=PARITIES, default="periodic")
    p.add_argument("--variant", choices=VARIANTS, default="unperturbed")
    p.add_argument("--out")
    p.add_argument("--summary")

    p = sub.add_parser("verify", help="run a verification harness")
    harness = p.add_subparsers(dest="harness", required=True)
    h = harness.add_parser("thm1", help="gap decay implies coefficient decay")
    _solver_flags(h)
    h.add_argument("--n-max", type=int, default=128)
    h.add_argument("--rho", type=float, default=DECAY_RHO)
    h.add_argument("--tau-abs", type=float, default=DECAY_TAU_ABS)
    h.add_argument("--growth", type=float, default=DECAY_GROWTH)
    h.add_argument("--json", dest="json_out")
    h.add_argument("--summary")
    h = harness.add_parser("thm2", help="free spectrum beyond n0 forces q = 0")
    _solver_flags(h)
    h.add_argument("--n0", type=int, default=32)
    h.add_argument("--eps", type=float, default=1.0)
    h.add_argument("--json", dest="json_out")
    h.add_argument("--summary")

    p = sub.add_parser("corpus", help="write the built-in potential corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=1)
    return parser


def parse_config(argv: list[str] | None = None) -> tuple[RunConfig, bool]:
    """Parse *argv* into a validated config and the verbosity flag."""
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    m_range = args.pop("m_range", None)
    if m_range is not None:
        args["m_min"], args["m_max"] = m_range
    config = RunConfig(**args)
    config.validate()
    return config, verbose


def _spectrum(config: RunConfig, q: FourierPotential, count: int) -> SpectrumTable:
    if config.source == "galerkin":
        return galerkin.spectrum_table(q, count, config.cutoff)
    return floquet.compute_spectrum(
        q,
        count,
        config.tol,
        integrator_tol=config.integrator_tol,
        cluster_tol=config.cluster_tol,
        method=config.method,
        workers=config.workers or worker_count(),
    )


def _target(path: str | None, default: str) -> Path:
    return Path(path) if path else Path.cwd() / default


def _solver_kwargs(config: RunConfig) -> dict:
    return {
        "source": config.source,
        "tol": config.tol,
        "integrator_tol": config.integrator_tol,
        "cluster_tol": config.cluster_tol,
        "method": config.method,
        "workers": config.workers or worker_count(),
    }


def execute(config: RunConfig) -> ResultBundle:
    """Run the pipeline *config* names and write its outputs.

    Harness violations are recorded on ``bundle.failure`` after the verdict
    files are written; every other error propagates.
    """
    bundle = ResultBundle(command=config.command, digest=config.digest())
    if config.command == "corpus":
        for path in corpus.write_corpus(config.out_dir, config.seed):
            bundle.files[path.stem] = path
        return bundle

    q = load_potential(config.potential)
    logger.info("Loaded %s: %r", config.potential, q)

    if config.command == "coeffs":
        bundle.files["coeffs"] = outputs.write_csv(
            _target(config.out, "coeffs.csv"), outputs.COEFFS_HEADER, outputs.coeff_rows(q, config.count), config
        )
    elif config.command == "spectrum":
        spectrum = _spectrum(config, q, config.count)
        bundle.files["spectrum"] = outputs.write_csv(
            _target(config.out, "spectrum.csv"), outputs.SPECTRUM_HEADER, outputs.spectrum_rows(spectrum), config
        )
    elif config.command == "gaps":
        gaps = floquet.gap_table(_spectrum(config, q, config.count), config.cluster_tol)
        bundle.files["gaps"] = outputs.write_csv(
            _target(config.out, "gaps.csv"), outputs.GAPS_HEADER, outputs.gap_rows(gaps), config
        )
    elif config.command == "galerkin":
        cutoff = config.cutoff or galerkin.default_cutoff(config.count, q.degree)
        pairs = galerkin.eigen(galerkin.assemble(q, config.parity, cutoff), config.count)
        bundle.files["galerkin"] = outputs.write_csv(
            _target(config.out, "galerkin.csv"), outputs.EIGEN_HEADER, outputs.eigen_rows(pairs), config
        )
    elif config.command == "asym":
        spectrum = _spectrum(config, q, 2 * config.m_max + 3)
        report = asymptotics.asymptotic_report(
            q, spectrum, (config.m_min, config.m_max), config.parity, config.variant
        )
        bundle.files["asym"] = outputs.write_csv(
            _target(config.out, "asym.csv"), outputs.ASYM_HEADER, outputs.asym_rows(report), config
        )
        if config.summary:
            bundle.files["summary"] = _write_summary(config.summary, build_summary(report))
    elif config.harness == "thm1":
        thresholds = DecayThresholds(rho=config.rho, tau_abs=config.tau_abs, growth=config.growth)
        report = decay.theorem1_harness(q, config.n_max, thresholds=thresholds, **_solver_kwargs(config))
        bundle.verdict = outputs.implication_payload(report)
        _write_verdict(config, bundle, report)
        try:
            decay.check_implication(report)
        except VerificationError as e:
            bundle.failure = str(e)
    else:
        report = decay.theorem2_harness(q, config.n0, config.eps, **_solver_kwargs(config))
        bundle.verdict = outputs.uniqueness_payload(report)
        _write_verdict(config, bundle, report)
        try:
            decay.check_recovery(report)
        except VerificationError as e:
            bundle.failure = str(e)
    return bundle


def _write_summary(path: str, text: str) -> Path:
    target = Path(path)
    target.write_text(text, encoding="utf-8")
    return target


def _write_verdict(config: RunConfig, bundle: ResultBundle, report) -> None:
    bundle.files["verdict"] = outputs.write_json(
        _target(config.json_out, f"verdict_{config.harness}.json"), bundle.verdict, config
    )
    if config.summary:
        bundle.files["summary"] = _write_summary(config.summary, build_summary(report))


def run(argv: list[str] | None = None) -> tuple[int, ResultBundle | None]:
    start = time.monotonic()
    try:
        config, verbose = parse_config(argv)
        if verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        logger.info(
            "hillspec %s %s, config %s, started %s",
            VERSION, config.command, config.digest()[:12],
            datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M UTC"),
        )
        bundle = execute(config)
    except VerificationError as e:
        logger.error("❌ %s", e)
        return 2, None
    except DomainError as e:
        logger.error("❌ %s", e)
        return 1, None

    elapsed = time.monotonic() - start
    for path in bundle.files.values():
        logger.info("  wrote %s", path)
    if bundle.failure:
        logger.error("❌ %s", bundle.failure)
        logger.info("\n%s finished with a verification failure in %.1fs", config.command, elapsed)
        return 2, bundle
    logger.info("\n✅ %s finished in %.1fs", config.command, elapsed)
    return 0, bundle


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code
