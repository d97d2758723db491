"""Fourier transforms of homogeneous extensions f * r^{-p} acting degree by
degree on the harmonic spectrum, and positive-definiteness certification of
distributions f^q * r^{-1}.

For an even degree-k component the transform multiplies by

    lambda(n, k, p) = (-1)^(k/2) * pi^(n/2) * 2^(n-p)
                      * Gamma((k + n - p) / 2) / Gamma((k + p) / 2),

validated in the test suite against the section identity
lambda(3, k, 2) = pi * c_{3,k} (great-circle quadrature oracle) and against
direct radial Fourier integrals at k = 0.  The Funk eigenvalues of the
spherical Radon transform in three dimensions are c_{3,k} = 2 pi P_k(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import gammaln, eval_legendre

from .errors import NotPositive, OutOfRange
from .sphere import (
    HarmonicSpectrum,
    SphereGrid,
    SphericalFunction,
    analyze,
    synthesize,
)

__all__ = [
    "multiplier",
    "multiplier_table",
    "funk_eigenvalue",
    "fourier_homogeneous",
    "certify_pd_r1",
    "spherical_parseval_check",
    "PDCertificate",
]

TWO_PI_CUBED = (2.0 * math.pi) ** 3


def multiplier(n: int, k: int, p: float) -> float:
    """lambda(n, k, p) for even k and 0 < p < n; log-Gamma keeps large k finite."""
    if k < 0 or k % 2 != 0:
        raise OutOfRange(f"degree must be even and non-negative, got k={k}")
    if not 0.0 < p < n:
        raise OutOfRange(f"exponent must lie in (0, {n}), got p={p}")
    sign = -1.0 if (k // 2) % 2 else 1.0
    log_mag = (n / 2.0) * math.log(math.pi) + (n - p) * math.log(2.0) \
        + gammaln((k + n - p) / 2.0) - gammaln((k + p) / 2.0)
    return sign * math.exp(log_mag)


def multiplier_table(n: int, l_max: int, p: float) -> np.ndarray:
    """lambda(n, k, p) for k = 0..l_max; odd-degree slots are zero."""
    out = np.zeros(l_max + 1)
    for k in range(0, l_max + 1, 2):
        out[k] = multiplier(n, k, p)
    return out


def funk_eigenvalue(k: int, n: int = 3) -> float:
    """Eigenvalue of the spherical Radon transform on degree k (n = 3 engine)."""
    if n != 3:
        raise OutOfRange("grid engine is fixed at n = 3")
    return 2.0 * math.pi * float(eval_legendre(k, 0.0))


@dataclass
class PDCertificate:
    """Verdict of a positive-definiteness test, with the minimizing witness."""

    verdict: str                    # "positive-definite" | "not-positive-definite" | "inconclusive"
    witness_point: Any              # unit vector (sphere engine) or 1D frequency
    witness_value: float            # minimum of the transform
    tolerance: float                # negativity threshold actually used
    transform_data: Any = None      # transformed function / 1D transform samples
    extra: dict = field(default_factory=dict)

    @property
    def is_positive_definite(self) -> bool:
        return self.verdict == "positive-definite"

    def to_json_dict(self) -> dict:
        wp = self.witness_point
        if isinstance(wp, np.ndarray):
            wp = [float(v) for v in wp]
        elif isinstance(wp, (np.floating, np.integer)):
            wp = float(wp)
        return {
            "verdict": self.verdict,
            "witness_point": wp,
            "witness_value": float(self.witness_value),
            "tolerance": float(self.tolerance),
        }


def fourier_homogeneous(spectrum: HarmonicSpectrum, p: float, n: int = 3) -> HarmonicSpectrum:
    """Spectrum of g where (f * r^{-p})^ = g * r^{-(n-p)}; even spectra only.

    Applying the operation twice with exponents p then n - p multiplies the
    input by (2 pi)^n.
    """
    residual = spectrum.even_part_residual()
    if residual > 1e-8:
        raise OutOfRange(
            f"spectrum has odd-degree content (relative size {residual:.2e}); "
            "homogeneous Fourier transforms are defined here for even functions"
        )
    table = np.zeros(spectrum.l_max + 1)
    for k in range(0, spectrum.l_max + 1, 2):
        table[k] = multiplier(n, k, p)
    return spectrum.scaled_by_degree(table)


def certify_pd_r1(f: SphericalFunction, q: float,
                  rel_tol: float = 1e-9) -> PDCertificate:
    """Decide positive definiteness of the distribution f^q * r^{-1} on R^3.

    Pipeline: pointwise power, harmonic analysis (degree cap doubled, bounded
    by the grid bandwidth, to absorb the spectral broadening of the power),
    per-degree multipliers at p = 1, synthesis.  The distribution is positive
    definite iff the synthesized transform is non-negative; minima within
    +-tol of zero yield an "inconclusive" verdict.
    """
    if f.min() <= 0.0:
        raise NotPositive(f"f must be strictly positive (min {f.min():.3e})")
    grid = f.grid
    base_l = f.spectrum.l_max if f.spectrum is not None else grid.bandwidth // 2
    l_power = min(2 * base_l, grid.bandwidth)
    power = SphericalFunction(grid, f.values ** q, parity="even")
    spec = analyze(power, l_power)
    back = synthesize(spec, grid)
    truncation_residual = float(np.max(np.abs(back.values - power.values)))
    transformed = synthesize(fourier_homogeneous(spec, 1.0), grid, parity="even")
    tol = rel_tol * max(transformed.max_abs(), 1e-300)
    i_min = int(np.argmin(transformed.values))
    v_min = float(transformed.values[i_min])
    if v_min < -tol:
        verdict = "not-positive-definite"
    elif v_min > tol:
        verdict = "positive-definite"
    else:
        verdict = "inconclusive"
    return PDCertificate(
        verdict=verdict,
        witness_point=grid.nodes[i_min],
        witness_value=v_min,
        tolerance=tol,
        transform_data=transformed,
        extra={"power_truncation_residual": truncation_residual, "l_power": l_power},
    )


def spherical_parseval_check(f: SphericalFunction, g: SphericalFunction,
                             p: float, n: int = 3) -> float:
    """Residual of the spherical Parseval identity, evaluated spectrally.

    | <(f r^{-p})^, (g r^{-(n-p)})^> - (2 pi)^n <f, g> | relative to the
    right-hand side.  Odd-degree content is projected out (with the residual
    reported through the even-part check of analyze).
    """
    grid = f.grid
    l_max = min(grid.bandwidth, g.grid.bandwidth)
    sf = analyze(f, l_max)
    sg = analyze(g, l_max)
    # zero the odd part: only even degrees carry multipliers
    keep = np.zeros(l_max + 1)
    keep[::2] = 1.0
    sf = sf.scaled_by_degree(keep)
    sg = sg.scaled_by_degree(keep)
    tf = fourier_homogeneous(sf, p, n)
    tg = fourier_homogeneous(sg, n - p, n)
    lhs = float(tf.coeffs @ tg.coeffs)
    rhs = (2.0 * math.pi) ** n * float(sf.coeffs @ sg.coeffs)
    scale = max(abs(rhs), 1.0)
    return abs(lhs - rhs) / scale
