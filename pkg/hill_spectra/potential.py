"""Real 1-periodic potentials stored as finite Fourier tables.

A potential q(x) = Σ_{|m|≤M} c_m e^{i2mπx} is kept as the one-sided
array c_0..c_M; negative indices follow from c_{-m} = conj(c_m).  All
coefficient-space primitives (Parseval, the antiderivative Q, the G±
tables) are exact finite sums.

The inner product is (f, g) = ∫₀¹ f·conj(g), so c_n = ∫₀¹ q e^{-i2nπx} dx.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from hill_spectra.config import CHOP_TOL, COEFF_TOL
from hill_spectra.errors import PotentialError, PotentialFileError
from hill_spectra.parity import PERIODIC, edge_index

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class FourierPotential:
    """Band-limited real potential; ``coeffs[m]`` is c_m for 0 ≤ m ≤ M."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=complex).ravel()
        if arr.size == 0:
            arr = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise PotentialError("potential coefficients must be finite")
        scale = max(1.0, float(np.max(np.abs(arr))))
        if abs(arr[0].imag) > COEFF_TOL * scale:
            raise PotentialError(f"c_0 = {arr[0]} is not real; the potential would be complex")
        arr[0] = arr[0].real
        nonzero = np.flatnonzero(arr)
        arr = arr[: nonzero[-1] + 1] if nonzero.size else arr[:1]
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def __repr__(self) -> str:
        return f"FourierPotential(degree={self.degree}, sup_coeff={self.sup_coeff:.6g})"

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def sup_coeff(self) -> float:
        """max_m |c_m|."""
        return float(np.max(np.abs(self.coeffs)))

    @property
    def abs_sum(self) -> float:
        """Σ_{|m|≤M} |c_m|, a bound on sup|q|."""
        mags = np.abs(self.coeffs)
        return float(mags[0] + 2.0 * mags[1:].sum())

    @property
    def mean(self) -> float:
        return float(self.coeffs[0].real)

    def coefficient(self, n: int) -> complex:
        n = int(n)
        if abs(n) > self.degree:
            return 0j
        c = complex(self.coeffs[abs(n)])
        return c.conjugate() if n < 0 else c

    def coefficients(self, indices) -> np.ndarray:
        """Vectorised :meth:`coefficient`; zero outside the band."""
        idx = np.asarray(indices, dtype=int)
        mag = np.abs(idx)
        inside = mag <= self.degree
        values = np.where(inside, self.coeffs[np.minimum(mag, self.degree)], 0j)
        return np.where(idx < 0, np.conj(values), values)

    def two_sided(self) -> tuple[np.ndarray, np.ndarray]:
        """Indices -M..M and the matching coefficients."""
        ks = np.arange(-self.degree, self.degree + 1)
        return ks, self.coefficients(ks)

    def table(self) -> dict[int, complex]:
        ks, cs = self.two_sided()
        return {int(k): complex(c) for k, c in zip(ks, cs) if c != 0}

    def shifted(self, constant: float) -> FourierPotential:
        arr = np.array(self.coeffs)
        arr[0] += constant
        return FourierPotential(arr)

    def without_mean(self) -> FourierPotential:
        return self.shifted(-self.mean)

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class AntiderivativeTable:
    """Coefficients of Q(x) = ∫₀ˣ q.

    Q(x) = c_0·x + Σ_{k≠0} Q_k (e^{i2kπx} − 1) with Q_k = c_k/(i2πk);
    ``mean`` is Q_0 = ∫₀¹ Q.
    """

    c0: float
    indices: np.ndarray
    values: np.ndarray
    mean: complex

    def coefficient(self, k: int) -> complex:
        hit = np.flatnonzero(self.indices == k)
        return complex(self.values[hit[0]]) if hit.size else 0j

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        phases = np.exp(1j * TWO_PI * np.multiply.outer(x, self.indices))
        return (self.c0 * x + (phases - 1.0) @ self.values).real


def from_coefficients(table: Mapping[int, complex], tol: float = COEFF_TOL) -> FourierPotential:
    """Build a potential from a two-sided table {m: c_m}.

    Hermitian symmetry c_{-m} = conj(c_m) must hold to ``tol`` relative to
    max(1, max|c_m|); within tolerance the table is symmetrized.  Missing
    entries count as zero.
    """
    clean: dict[int, complex] = {}
    for key, value in table.items():
        try:
            m = int(key)
        except (TypeError, ValueError):
            raise PotentialError(f"coefficient index {key!r} is not an integer") from None
        if m != key and not isinstance(key, str):
            raise PotentialError(f"coefficient index {key!r} is not an integer")
        c = complex(value)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise PotentialError(f"coefficient c_{m} is not finite")
        clean[m] = clean.get(m, 0j) + c

    degree = max((abs(m) for m, c in clean.items() if c != 0), default=0)
    scale = max(1.0, max((abs(c) for c in clean.values()), default=0.0))
    coeffs = np.zeros(degree + 1, dtype=complex)
    for m in range(degree + 1):
        pos, neg = clean.get(m, 0j), clean.get(-m, 0j)
        if abs(neg - pos.conjugate()) > tol * scale:
            raise PotentialError(
                f"c_{-m} = {neg} is not conj(c_{m}) = {pos.conjugate()}; the potential would not be real"
            )
        coeffs[m] = 0.5 * (pos + neg.conjugate())
    return FourierPotential(coeffs)


def cosine_series(amplitudes: Mapping[int, float], constant: float = 0.0) -> FourierPotential:
    """q(x) = constant + Σ a_k cos(2πkx)."""
    table: dict[int, complex] = {0: constant}
    for k, a in amplitudes.items():
        if k <= 0:
            raise PotentialError(f"cosine frequency must be positive, got {k}")
        table[k] = table.get(k, 0) + a / 2
        table[-k] = table.get(-k, 0) + a / 2
    return from_coefficients(table)


def evaluate(q: FourierPotential, x):
    """q(x) for scalar or array *x*; the imaginary part is checked and dropped."""
    ks, cs = q.two_sided()
    xs = np.asarray(x, dtype=float)
    values = np.exp(1j * TWO_PI * np.multiply.outer(xs, ks)) @ cs
    bound = 1e-12 * max(q.abs_sum, 1.0)
    if np.any(np.abs(np.imag(values)) > bound):
        raise PotentialError("evaluated potential has a non-negligible imaginary part")
    values = np.real(values)
    return float(values) if values.ndim == 0 else values


def fourier_coefficient(q: FourierPotential, n: int) -> complex:
    return q.coefficient(n)


def l2_norm_squared(q: FourierPotential) -> float:
    """∫₀¹ q² by Parseval."""
    mags = np.abs(q.coeffs) ** 2
    return float(mags[0] + 2.0 * mags[1:].sum())


def antiderivative(q: FourierPotential) -> AntiderivativeTable:
    ks, cs = q.two_sided()
    keep = ks != 0
    ks, cs = ks[keep], cs[keep]
    values = cs / (1j * TWO_PI * ks)
    return AntiderivativeTable(
        c0=q.mean,
        indices=ks,
        values=values,
        mean=complex(q.mean / 2 - values.sum()),
    )


def g_coefficients(q: FourierPotential, m: int, sign: int, parity: str = PERIODIC) -> dict[int, complex]:
    """G±_{m1} = c_{m1 ± n}/(i2πm1) over every m1 ≠ 0 with |m1 ± n| ≤ M.

    These are the Fourier coefficients of G±(x) = ∫₀ˣ q(t) e^{∓i2nπt} dt − c_{±n}·x,
    with n the edge frequency of pair *m*.
    """
    if sign not in (1, -1):
        raise PotentialError(f"sign must be +1 or -1, got {sign}")
    n = edge_index(m, parity)
    shift = sign * n
    m1 = np.arange(-q.degree - shift, q.degree - shift + 1)
    m1 = m1[m1 != 0]
    values = q.coefficients(m1 + shift) / (1j * TWO_PI * m1)
    return {int(k): complex(v) for k, v in zip(m1, values)}


def g_function(q: FourierPotential, m: int, sign: int, x, parity: str = PERIODIC):
    """G±(x, m) = G_0 + Σ_{m1≠0} G±_{m1} e^{i2m1πx}, with G_0 = −Σ G±_{m1}."""
    table = g_coefficients(q, m, sign, parity)
    ks = np.fromiter(table.keys(), dtype=int, count=len(table))
    gs = np.fromiter(table.values(), dtype=complex, count=len(table))
    xs = np.asarray(x, dtype=float)
    values = np.exp(1j * TWO_PI * np.multiply.outer(xs, ks)) @ gs - gs.sum()
    return complex(values) if values.ndim == 0 else values


def ingest_grid(samples) -> FourierPotential:
    """Band-limit samples q(j/N), j = 0..N−1, to degree N/2 − 1 via the FFT.

    The Nyquist mode is dropped and coefficients below
    ``CHOP_TOL·max(1, Σ|c|)`` are zeroed so the degree reflects content.
    """
    arr = np.asarray(samples, dtype=float).ravel()
    size = arr.size
    if size < 4 or size & (size - 1):
        raise PotentialError(f"sample count must be a power of two >= 4, got {size}")
    if not np.all(np.isfinite(arr)):
        raise PotentialError("samples must be finite")
    spectrum = np.fft.fft(arr) / size
    top = size // 2 - 1
    ks = np.arange(top + 1)
    coeffs = 0.5 * (spectrum[ks] + np.conj(spectrum[-ks % size]))
    floor = CHOP_TOL * max(1.0, float(np.abs(coeffs[0]) + 2 * np.abs(coeffs[1:]).sum()))
    coeffs[np.abs(coeffs) < floor] = 0
    q = FourierPotential(coeffs)
    logger.debug("ingested %d samples -> degree %d", size, q.degree)
    return q


def load_potential(path: str | Path) -> FourierPotential:
    """Read a potential file.

    Two shapes are accepted::

        {"kind": "coeffs", "coeffs": {"1": [1.0, 0.0], "-1": [1.0, 0.0]}}
        {"kind": "samples", "samples": [2.0, 0.0, -2.0, 0.0]}
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError:
        raise PotentialFileError(f"cannot read potential file: {path}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PotentialFileError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None
    if not isinstance(raw, dict):
        raise PotentialFileError(f"{path}: top level must be an object")

    kind = raw.get("kind")
    if kind == "coeffs":
        entries = raw.get("coeffs")
        if not isinstance(entries, dict):
            raise PotentialFileError(f"{path}: 'coeffs' must map integer keys to [re, im] pairs")
        table: dict[int, complex] = {}
        for key, value in entries.items():
            try:
                m = int(key)
            except ValueError:
                raise PotentialFileError(f"{path}: coefficient key {key!r} is not an integer") from None
            table[m] = _parse_complex(value, path, key)
        try:
            return from_coefficients(table)
        except PotentialError as e:
            raise PotentialFileError(f"{path}: {e}") from None
    if kind == "samples":
        samples = raw.get("samples")
        if not isinstance(samples, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in samples
        ):
            raise PotentialFileError(f"{path}: 'samples' must be a list of numbers")
        try:
            return ingest_grid(samples)
        except PotentialError as e:
            raise PotentialFileError(f"{path}: {e}") from None
    raise PotentialFileError(f"{path}: 'kind' must be 'coeffs' or 'samples', got {kind!r}")


def _parse_complex(value, path: Path, key: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise PotentialFileError(f"{path}: coefficient {key} must be a number or [re, im]")


def potential_payload(q: FourierPotential) -> dict:
    """JSON-ready coefficient form of *q*, keys in increasing order."""
    return {
        "kind": "coeffs",
        "coeffs": {str(m): [c.real, c.imag] for m, c in sorted(q.table().items())},
    }


def dump_potential(q: FourierPotential, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(potential_payload(q), indent=4) + "\n", encoding="utf-8")
    return path
