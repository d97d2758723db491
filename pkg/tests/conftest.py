import numpy as np
import pytest

from radoncomp.sphere import HarmonicSpectrum, build_grid, synthesize


@pytest.fixture(scope="session")
def grid16():
    return build_grid(16, 32)


@pytest.fixture(scope="session")
def grid18():
    return build_grid(18, 36)


def random_even_spectrum(rng, l_max, scale=1.0):
    """Random spectrum with odd-degree blocks zeroed."""
    coeffs = rng.standard_normal((l_max + 1) ** 2) * scale
    for k in range(1, l_max + 1, 2):
        coeffs[k * k:(k + 1) ** 2] = 0.0
    return HarmonicSpectrum(l_max, coeffs)


def random_positive_even(rng, grid, l_max=6, amplitude=0.2):
    """Strictly positive even function: 1 + small band-limited perturbation."""
    spec = random_even_spectrum(rng, l_max)
    pert = synthesize(spec, grid, parity="even")
    a = amplitude / max(float(np.max(np.abs(pert.values))), 1e-300)
    vals = 1.0 + a * pert.values
    from radoncomp.sphere import SphericalFunction

    return SphericalFunction(grid, vals, parity="even")
