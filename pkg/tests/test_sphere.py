"""Harmonic analysis on S^2: grid construction, analysis/synthesis round
trips, off-grid evaluation, norms, and the reverse Hoelder check."""

import math

import numpy as np
import pytest
from scipy.special import eval_legendre, sph_harm_y

from conftest import random_even_spectrum
from radoncomp.errors import BandwidthExceeded, DegenerateInput, InvalidGrid
from radoncomp.sphere import (
    FOUR_PI,
    HarmonicSpectrum,
    SphericalFunction,
    analyze,
    build_grid,
    constant_function,
    evaluate_spectrum,
    grid_function,
    lp_norm_sphere,
    normalized_legendre_table,
    reverse_holder_check,
    synthesize,
)


# ----------------------------------------------------------------------------
# Grid
# ----------------------------------------------------------------------------

def test_grid_weights_sum_to_sphere_area(grid16):
    assert math.isclose(float(np.sum(grid16.weights)), FOUR_PI, rel_tol=1e-14)


def test_grid_shapes_and_bandwidth(grid16):
    assert grid16.n_nodes == 16 * 32
    assert grid16.nodes.shape == (512, 3)
    # exact analysis degree: limited by both polar and azimuthal resolution
    assert grid16.bandwidth == min(16 - 1, 32 // 2 - 1) == 15


def test_grid_nodes_are_unit_vectors(grid16):
    norms = np.linalg.norm(grid16.nodes, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-14


def test_grid_antipode_map_is_exact(grid16):
    assert np.max(np.abs(grid16.nodes + grid16.nodes[grid16.antipode])) < 1e-14
    # involution
    assert np.array_equal(grid16.antipode[grid16.antipode],
                          np.arange(grid16.n_nodes))


def test_grid_is_cached():
    assert build_grid(16, 32) is build_grid(16, 32)


def test_invalid_grid_rejected():
    with pytest.raises(InvalidGrid):
        build_grid(1, 32)
    with pytest.raises(InvalidGrid):
        build_grid(8, 7)   # odd azimuth count breaks the antipode map
    with pytest.raises(InvalidGrid):
        build_grid(8, 2)


def test_quadrature_exact_on_polynomial(grid16):
    # integral over S^2 of z^2 is 4 pi / 3; of x*y is 0
    z2 = float(grid16.weights @ grid16.nodes[:, 2] ** 2)
    xy = float(grid16.weights @ (grid16.nodes[:, 0] * grid16.nodes[:, 1]))
    assert math.isclose(z2, FOUR_PI / 3.0, rel_tol=1e-13)
    assert abs(xy) < 1e-14


# ----------------------------------------------------------------------------
# Normalized Legendre table vs scipy oracle
# ----------------------------------------------------------------------------

def test_normalized_legendre_matches_scipy():
    x = np.linspace(-0.99, 0.99, 7)
    q = normalized_legendre_table(10, x)
    theta = np.arccos(x)
    for k in (0, 1, 2, 5, 10):
        for m in range(0, k + 1):
            # scipy's spherical harmonic at phi=0 gives
            # (-1)^m-free normalized associated Legendre up to the CS phase
            ref = sph_harm_y(k, m, theta, 0.0).real * (-1.0) ** m
            assert np.max(np.abs(q[k, m] - ref)) < 1e-12, (k, m)


def test_basis_orthonormality(grid16):
    """Quadrature Gram matrix of the basis is the identity up to bandwidth."""
    l_max = 8
    nb = (l_max + 1) ** 2
    B = np.empty((nb, grid16.n_nodes))
    for j in range(nb):
        unit = np.zeros(nb)
        unit[j] = 1.0
        B[j] = synthesize(HarmonicSpectrum(l_max, unit), grid16).values
    gram = (B * grid16.weights) @ B.T
    assert np.max(np.abs(gram - np.eye(nb))) < 1e-12


# ----------------------------------------------------------------------------
# Analysis / synthesis
# ----------------------------------------------------------------------------

def test_round_trip_band_limited(grid16):
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal((grid16.bandwidth + 1) ** 2)
    spec = HarmonicSpectrum(grid16.bandwidth, coeffs)
    f = synthesize(spec, grid16)
    back = analyze(f, grid16.bandwidth)
    assert np.max(np.abs(back.coeffs - coeffs)) < 1e-11


def test_analyze_constant(grid16):
    f = constant_function(grid16, 3.0)
    spec = analyze(f, 4)
    # only the degree-0 coefficient survives: 3 * sqrt(4 pi)
    assert math.isclose(spec.coeff(0, 0), 3.0 * math.sqrt(FOUR_PI),
                        rel_tol=1e-14)
    assert np.max(np.abs(spec.coeffs[1:])) < 1e-13


def test_bandwidth_exceeded_raises(grid16):
    f = constant_function(grid16, 1.0)
    with pytest.raises(BandwidthExceeded):
        analyze(f, grid16.bandwidth + 1)


def test_evaluate_spectrum_matches_synthesis(grid16):
    rng = np.random.default_rng(11)
    spec = HarmonicSpectrum(6, rng.standard_normal(49))
    on_grid = synthesize(spec, grid16).values
    off = evaluate_spectrum(spec, grid16.nodes)
    assert np.max(np.abs(on_grid - off)) < 1e-12


def test_evaluate_spectrum_legendre_axis():
    # degree-k zonal harmonic evaluated along z equals its closed form
    k = 6
    nb = (k + 1) ** 2
    unit = np.zeros(nb)
    unit[k * k + k] = 1.0
    spec = HarmonicSpectrum(k, unit)
    z = np.linspace(-1.0, 1.0, 9)
    pts = np.stack([np.sqrt(1 - z * z), np.zeros_like(z), z], axis=1)
    ref = math.sqrt((2 * k + 1) / FOUR_PI) * eval_legendre(k, z)
    assert np.max(np.abs(evaluate_spectrum(spec, pts) - ref)) < 1e-12


# ----------------------------------------------------------------------------
# Spectrum helpers
# ----------------------------------------------------------------------------

def test_flat_index_layout():
    spec = HarmonicSpectrum(3, np.arange(16.0))
    assert spec.coeff(0, 0) == 0.0
    assert spec.coeff(1, -1) == 1.0
    assert spec.coeff(1, 0) == 2.0
    assert spec.coeff(1, 1) == 3.0
    assert spec.coeff(3, -3) == 9.0
    assert list(spec.degree_slice(2)) == [4.0, 5.0, 6.0, 7.0, 8.0]


def test_degrees_per_coefficient():
    spec = HarmonicSpectrum(2, np.zeros(9))
    assert list(spec.degrees()) == [0, 1, 1, 1, 2, 2, 2, 2, 2]


def test_truncated_extend_and_cut():
    spec = HarmonicSpectrum(2, np.arange(9.0))
    cut = spec.truncated(1)
    assert list(cut.coeffs) == [0.0, 1.0, 2.0, 3.0]
    ext = spec.truncated(3)
    assert ext.l_max == 3
    assert list(ext.coeffs[:9]) == list(np.arange(9.0))
    assert np.all(ext.coeffs[9:] == 0.0)


def test_even_part_residual():
    rng = np.random.default_rng(3)
    even = random_even_spectrum(rng, 5)
    assert even.even_part_residual() == 0.0
    coeffs = np.zeros(36)
    coeffs[0] = 1.0
    coeffs[2] = 0.5       # degree-1 content
    assert math.isclose(HarmonicSpectrum(5, coeffs).even_part_residual(), 0.5)


def test_antipodal_residual_even_vs_odd(grid16):
    even = grid_function(grid16, lambda u: u[:, 2] ** 2)
    odd = grid_function(grid16, lambda u: u[:, 2])
    assert even.antipodal_residual() < 1e-14
    assert odd.antipodal_residual() > 1.0


# ----------------------------------------------------------------------------
# Norms, reverse Hoelder
# ----------------------------------------------------------------------------

def test_lp_norm_constant(grid16):
    f = constant_function(grid16, 2.0)
    for p in (0.5, 1.0, 2.0, 3.0):
        assert math.isclose(lp_norm_sphere(f, p), 2.0 * FOUR_PI ** (1.0 / p),
                            rel_tol=1e-13)


def test_lp_norm_rejects_nonpositive_p(grid16):
    with pytest.raises(ValueError):
        lp_norm_sphere(constant_function(grid16, 1.0), 0.0)


def test_lp_norm_monotone_in_p_on_probability_scale(grid16):
    # on a probability space, ||f||_p is nondecreasing in p; rescale weights
    rng = np.random.default_rng(5)
    vals = 1.0 + 0.5 * rng.random(grid16.n_nodes)
    f = SphericalFunction(grid16, vals)
    norms = [lp_norm_sphere(f, p) * FOUR_PI ** (-1.0 / p)
             for p in (0.5, 1.0, 2.0, 4.0)]
    assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))


def test_reverse_holder_equality_for_constants(grid16):
    h = constant_function(grid16, 2.0)
    w = constant_function(grid16, 3.0)
    ok, margin = reverse_holder_check(h, w, 2.0)
    assert ok
    assert abs(margin) < 1e-9


def test_reverse_holder_strict_for_nonconstant(grid16):
    h = grid_function(grid16, lambda u: 1.0 + 0.5 * u[:, 2] ** 2)
    w = grid_function(grid16, lambda u: 1.0 + 0.3 * u[:, 0] ** 2)
    ok, margin = reverse_holder_check(h, w, 2.0)
    assert ok
    assert margin > 0.0


def test_reverse_holder_rejects_degenerate(grid16):
    zero = constant_function(grid16, 0.0)
    one = constant_function(grid16, 1.0)
    with pytest.raises(DegenerateInput):
        reverse_holder_check(zero, one, 2.0)
    with pytest.raises(ValueError):
        reverse_holder_check(one, one, 1.0)
