"""Norm comparison under Radon-transform domination on R^3: the affirmative
verifier, and the counterexample synthesizer for the failing range of p.

Proof chain replayed by the verifier (p > 1): with w = phi^{p-1} an
intersection function, its ray measures mu_theta are non-negative and

    int phi^p = C int int Rphi(t, theta) mu_theta(t) dt dtheta
             <= C int int Rpsi(t, theta) mu_theta(t) dt dtheta
              = int phi^{p-1} psi  <=  |phi|_p^{p-1} |psi|_p      (Hoelder)

forcing |phi|_p <= |psi|_p.  For 0 < p < 1 the roles of phi and psi swap and
the last step is the reverse Hoelder inequality.  At p = 1 domination alone
decides, by integrating the sinogram gap over offsets and directions.

The counterexample constructor runs the chain backwards: when w is not an
intersection function, some mu_nu is negative on a frequency window; a
sinogram-side bump beta(t) (times an angular cap for non-radial witnesses)
supported there is pulled back through the Fourier-slice identity to a
sign-changing h with R h = beta >= 0 and int w h < 0, and phi = psi - eta h
dominates while carrying the strictly larger norm.  (h itself cannot be taken
non-negative: 0 <= phi <= psi pointwise already forces |phi|_p <= |psi|_p.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    ConstructionFailed,
    DominationFails,
    GridMismatch,
    GridTooCoarse,
    InputInvalid,
    NotApplicable,
    OutOfRange,
    TailTooHeavy,
)
from .radon3d import (
    PAIRING_CONSTANT,
    DEFAULT_T_MAX,
    IntersectionCertificate,
    RadialProfile,
    SeparableFunction,
    Sinogram,
    certify_intersection_function,
    hemisphere_indices,
    radon_transform,
    separable_power,
    symmetric_nodes,
)
from .sphere import HarmonicSpectrum, SphericalFunction, analyze, synthesize

__all__ = [
    "RnComparisonReport",
    "lp_norm_rn",
    "sinogram_dominates",
    "verify_comparison_radon",
    "construct_counterexample_radon",
]


@dataclass
class RnComparisonReport:
    """Outcome of a Radon-domination norm comparison on R^3."""

    p: float
    domination_margin: float
    certificate: IntersectionCertificate | None
    lp_phi: float
    lp_psi: float
    conclusion_holds: bool
    hypothesis_holds: bool | None          # None when no certificate is needed
    chain: dict = field(default_factory=dict)
    notes: str = ""

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "domination_margin": self.domination_margin,
            "certificate": None if self.certificate is None
            else self.certificate.to_json_dict(),
            "lp_phi": self.lp_phi,
            "lp_psi": self.lp_psi,
            "conclusion_holds": self.conclusion_holds,
            "hypothesis_holds": self.hypothesis_holds,
            "chain": {k: float(v) for k, v in self.chain.items()},
            "notes": self.notes,
        }


# ----------------------------------------------------------------------------
# L^p norms
# ----------------------------------------------------------------------------

def _radial_quadrature(r_max: float, n_radial: int):
    rg, wg = np.polynomial.legendre.leggauss(n_radial)
    rg = 0.5 * r_max * (rg + 1.0)
    wg = 0.5 * r_max * wg
    return rg, wg


def lp_norm_rn(phi: SeparableFunction, p: float,
               n_radial: int = 2048, tail_tol: float = 1e-6) -> float:
    """|phi|_p by polar quadrature (Gauss-Legendre radius x sphere grid)."""
    if p <= 0.0:
        raise OutOfRange(f"p must be positive, got {p}")
    r_max = phi.terms[0][0].r_max
    rg, wg = _radial_quadrature(r_max, n_radial)
    grid = phi.grid
    vals = np.abs(phi.values_polar(rg)) ** p
    total = float((wg * rg * rg) @ vals @ grid.weights)
    # boundary-contribution estimate: integrand level at the grid edge times
    # one more copy of the radial extent
    edge = float(np.abs(phi.values_polar(np.array([r_max]))[0]) ** p
                 @ grid.weights)
    tail_est = edge * r_max ** 3
    if tail_est > tail_tol * max(total, 1e-300):
        raise TailTooHeavy(
            f"estimated boundary contribution {tail_est:.3e} exceeds "
            f"{tail_tol:.0e} of the integral {total:.3e}; |phi|^p is not "
            "captured by the truncated grid"
        )
    return total ** (1.0 / p)


# ----------------------------------------------------------------------------
# Sinogram domination
# ----------------------------------------------------------------------------

def sinogram_dominates(a: Sinogram, b: Sinogram) -> float:
    """min over all samples of b - a; negative means domination fails."""
    if a.values.shape != b.values.shape \
            or np.max(np.abs(a.t - b.t)) > 1e-12 \
            or np.max(np.abs(a.directions - b.directions)) > 1e-12:
        raise GridMismatch("sinograms are sampled on different (t, theta) grids")
    return float(np.min(b.values - a.values))


# ----------------------------------------------------------------------------
# The verifier
# ----------------------------------------------------------------------------

def _sinogram_pair(phi: SeparableFunction, psi: SeparableFunction,
                   t: np.ndarray | None = None):
    if phi.grid is not psi.grid and phi.grid.n_nodes != psi.grid.n_nodes:
        raise GridMismatch("phi and psi live on different sphere grids")
    if t is None:
        t = symmetric_nodes()
    r_phi = radon_transform(phi, t=t)
    r_psi = radon_transform(psi, t=t)
    return r_phi, r_psi


def _pair_with_measures(sino: Sinogram, cert: IntersectionCertificate,
                        weights: np.ndarray) -> float:
    """PAIRING_CONSTANT * int_{S^2} int_R Rf(t, theta) mu_theta(t) dt dtheta."""
    total = 0.0
    per_dir = cert.per_direction
    radial_case = len(per_dir) == 1
    for d in range(len(sino.directions)):
        c = per_dir[0] if radial_case else per_dir[d]
        omega, mhat = c.transform_data
        spline = CubicSpline(sino.t, sino.values[d])
        inside = (omega >= sino.t[0]) & (omega <= sino.t[-1])
        vals = np.zeros_like(omega)
        vals[inside] = spline(omega[inside])
        total += weights[d] * np.trapezoid(vals * mhat, omega)
    return PAIRING_CONSTANT * total


def verify_comparison_radon(phi: SeparableFunction, psi: SeparableFunction,
                            p: float, rel_tol: float = 1e-9,
                            chain_tol: float = 1e-6,
                            certify_kwargs: dict | None = None
                            ) -> RnComparisonReport:
    """Decide |phi|_p <= |psi|_p from sinogram domination.

    p = 1: domination integrates directly to the norm comparison (no
    certificate).  p > 1: requires phi^{p-1} to be an intersection function;
    0 < p < 1: requires psi^{p-1} (a growing power -- usually outside the
    admissible decay class, in which case the hypothesis is reported failed).
    A failed hypothesis is reported, not raised; failed domination raises.
    """
    if p <= 0.0:
        raise OutOfRange(f"p must be positive, got {p}")
    for name, fn in (("phi", phi), ("psi", psi)):
        m = fn.min_on_sample_grid()
        if m < -1e-9 * max(abs(m), 1.0):
            raise InputInvalid(f"{name} must be non-negative (min {m:.3e})")
    r_phi, r_psi = _sinogram_pair(phi, psi)
    scale = max(float(np.max(np.abs(r_psi.values))), 1e-300)
    margin = sinogram_dominates(r_phi, r_psi)
    if margin < -rel_tol * scale:
        raise DominationFails(
            f"R phi exceeds R psi by {-margin:.3e} somewhere "
            f"(tolerance {rel_tol * scale:.3e})"
        )
    lp_phi = lp_norm_rn(phi, p)
    lp_psi = lp_norm_rn(psi, p)
    idx = hemisphere_indices(phi.grid)
    w_dir = 2.0 * phi.grid.weights[idx]

    if p == 1.0:
        gap = lp_psi - lp_phi
        sino_gap = float(w_dir @ np.trapezoid(
            r_psi.values - r_phi.values, r_psi.t, axis=1)) / (4.0 * math.pi)
        resid = abs(gap - sino_gap) / max(abs(gap), lp_phi, 1e-300)
        return RnComparisonReport(
            p=p, domination_margin=margin, certificate=None,
            lp_phi=lp_phi, lp_psi=lp_psi,
            conclusion_holds=lp_phi <= lp_psi + chain_tol * lp_psi,
            hypothesis_holds=None,
            chain={"norm_gap": gap, "sinogram_gap": sino_gap,
                   "cavalieri_residual": resid},
            notes="p = 1: domination integrates directly to the comparison",
        )

    side_name = "phi" if p > 1.0 else "psi"
    base = phi if p > 1.0 else psi
    try:
        w_fn = separable_power(base, p - 1.0)
        cert = certify_intersection_function(w_fn, **(certify_kwargs or {}))
    except (InputInvalid, GridTooCoarse) as exc:
        return RnComparisonReport(
            p=p, domination_margin=margin, certificate=None,
            lp_phi=lp_phi, lp_psi=lp_psi,
            conclusion_holds=False, hypothesis_holds=False,
            chain={"norm_ratio": (lp_psi / max(lp_phi, 1e-300)) ** p},
            notes=f"hypothesis fails: {side_name}^{{p-1}} could not be "
                  f"certified as an intersection function ({exc})",
        )
    if not cert.is_intersection_function:
        return RnComparisonReport(
            p=p, domination_margin=margin, certificate=cert,
            lp_phi=lp_phi, lp_psi=lp_psi,
            conclusion_holds=False, hypothesis_holds=False,
            chain={"norm_ratio": (lp_psi / max(lp_phi, 1e-300)) ** p},
            notes=f"hypothesis fails: {side_name}^{{p-1}} is not an "
                  "intersection function (no conclusion; the comparison may "
                  "still fail, see the counterexample constructor)",
        )

    # replay the proof chain through the ray-measure pairing
    pair_phi = _pair_with_measures(r_phi, cert, w_dir)   # int w * phi
    pair_psi = _pair_with_measures(r_psi, cert, w_dir)   # int w * psi
    if p > 1.0:
        direct_self = lp_phi ** p                        # int phi^{p-1} phi
        holder_bound = lp_phi ** (p - 1.0) * lp_psi
        chain = {
            "pairing_self": pair_phi,
            "pairing_cross": pair_psi,
            "pairing_residual": abs(pair_phi - direct_self)
            / max(direct_self, 1e-300),
            "monotone_step": pair_psi - pair_phi,
            "holder_slack": holder_bound - pair_psi,
        }
        ok = (pair_phi <= pair_psi + chain_tol * max(pair_psi, 1.0)
              and pair_psi <= holder_bound + chain_tol * max(holder_bound, 1.0))
    else:
        direct_self = lp_psi ** p                        # int psi^{p-1} psi
        rev_holder_bound = lp_psi ** (p - 1.0) * lp_phi  # reverse Hoelder
        chain = {
            "pairing_self": pair_psi,
            "pairing_cross": pair_phi,
            "pairing_residual": abs(pair_psi - direct_self)
            / max(direct_self, 1e-300),
            "monotone_step": pair_psi - pair_phi,
            "reverse_holder_slack": pair_phi - rev_holder_bound,
        }
        ok = (pair_phi <= pair_psi + chain_tol * max(pair_psi, 1.0)
              and rev_holder_bound <= pair_phi
              + chain_tol * max(abs(pair_phi), 1.0))
    conclusion = lp_phi <= lp_psi * (1.0 + chain_tol)
    return RnComparisonReport(
        p=p, domination_margin=margin, certificate=cert,
        lp_phi=lp_phi, lp_psi=lp_psi,
        conclusion_holds=bool(conclusion and ok), hypothesis_holds=True,
        chain=chain,
    )


# ----------------------------------------------------------------------------
# The counterexample constructor
# ----------------------------------------------------------------------------

def _bump_profile_from_sinogram(t0: float, sigma: float, cap_spec,
                                grid, r_max: float = DEFAULT_T_MAX,
                                n_r: int = 1024) -> SeparableFunction:
    """h with R h(t, theta) = beta(t) * cap(theta) exactly (Fourier slice).

    beta(t) = e^{-(t - t0)^2/sigma^2} + e^{-(t + t0)^2/sigma^2}, so
    beta^(s) = 2 sigma sqrt(pi) cos(s t0) e^{-sigma^2 s^2 / 4}; per cap degree
    h_km(r) = (-1)^{k/2} c_km / (2 pi^2) * int beta^(s) j_k(rs) s^2 ds.
    """
    from scipy.special import spherical_jn

    r_vals = np.linspace(0.0, r_max, n_r)
    s_max = max(20.0 / sigma, 4.0 * abs(t0), 40.0)
    s = np.linspace(0.0, s_max, 4096)
    bhat = 2.0 * sigma * math.sqrt(math.pi) * np.cos(s * t0) \
        * np.exp(-0.25 * (sigma * s) ** 2)
    terms = []
    nb = (cap_spec.l_max + 1) ** 2
    unit = np.zeros(nb)
    for k in range(0, cap_spec.l_max + 1, 2):
        block = cap_spec.degree_slice(k)
        if np.max(np.abs(block)) <= 1e-14 * max(np.max(np.abs(cap_spec.coeffs)),
                                                1e-300):
            continue
        jk = spherical_jn(k, np.outer(r_vals, s))
        radial = np.trapezoid(jk * (bhat * s * s)[None, :], s, axis=1)
        sign = -1.0 if (k // 2) % 2 else 1.0
        prof = RadialProfile(sign * radial / (2.0 * math.pi ** 2), r_max,
                             "schwartz")
        for j in range(k * k, (k + 1) * (k + 1)):
            if abs(cap_spec.coeffs[j]) <= 1e-14 * max(
                    np.max(np.abs(cap_spec.coeffs)), 1e-300):
                continue
            unit[:] = 0.0
            unit[j] = 1.0
            ang = synthesize(HarmonicSpectrum(cap_spec.l_max,
                                              unit * cap_spec.coeffs[j]), grid)
            terms.append((prof, ang))
    return SeparableFunction(terms)


def _angular_cap_spectrum(nu: np.ndarray, grid, power: int):
    """Spectrum of the even, non-negative, exactly band-limited cap
    <theta, nu>^{2 power} (a polynomial, so analysis is exact)."""
    vals = (grid.nodes @ nu) ** (2 * power)
    return analyze(SphericalFunction(grid, vals, parity="even"),
                   min(2 * power, grid.bandwidth))


def _combine(psi: SeparableFunction, h: SeparableFunction,
             coeff: float) -> SeparableFunction:
    terms = list(psi.terms)
    for prof, ang in h.terms:
        terms.append((RadialProfile(prof.samples * coeff, prof.r_max,
                                    prof.decay,
                                    (lambda q, c: (lambda r: c * q(r)))(
                                        prof.evaluator, coeff)
                                    if prof.evaluator else None), ang))
    return SeparableFunction(terms)


def _integral_against(w_fn: SeparableFunction, h: SeparableFunction,
                      n_radial: int = 300) -> float:
    r_max = min(w_fn.terms[0][0].r_max, h.terms[0][0].r_max)
    rg, wg = _radial_quadrature(r_max, n_radial)
    grid = w_fn.grid
    vals = w_fn.values_polar(rg) * h.values_polar(rg)
    return float((wg * rg * rg) @ vals @ grid.weights)


def _negative_window(omega: np.ndarray, mhat: np.ndarray,
                     witness: float) -> tuple[float, float]:
    """Witness frequency and the half-depth half-width of the negative dip
    around it (the sign-only window can stretch to the grid edge for
    fast-decaying transforms, which would make the bump heavier-tailed than
    any Schwartz data; the half-depth width localizes it)."""
    i_w = int(np.argmin(np.abs(omega - witness)))
    depth = mhat[i_w]
    deep = mhat < 0.5 * depth
    lo = i_w
    while lo > 0 and deep[lo - 1]:
        lo -= 1
    hi = i_w
    while hi < len(omega) - 1 and deep[hi + 1]:
        hi += 1
    half = max(0.5 * (omega[hi] - omega[lo]), omega[1] - omega[0])
    return abs(float(witness)), float(half)


def construct_counterexample_radon(psi: SeparableFunction, p: float,
                                   rel_tol: float = 1e-9,
                                   gap_tol: float = 1e-8,
                                   max_halvings: int = 20
                                   ) -> tuple[SeparableFunction,
                                              RnComparisonReport]:
    """phi = psi - eta h with R phi <= R psi yet |phi|_p > |psi|_p (p > 1).

    Requires psi^{p-1} to fail intersection-function certification; the bump
    parameters (t0, sigma) are searched on a small lattice around the
    certificate's negative-frequency window, the angular cap (non-radial
    witnesses) around the witness direction.
    """
    if p <= 0.0:
        raise OutOfRange(f"p must be positive, got {p}")
    if p == 1.0:
        raise NotApplicable("at p = 1 the comparison always holds under "
                            "domination; no counterexample exists")
    # for 0 < p < 1 this raises InputInvalid on any decaying psi: the growing
    # power leaves the admissible class (the symmetric case-b construction
    # needs data outside this tool's function class)
    w_fn = separable_power(psi, p - 1.0)
    cert = certify_intersection_function(w_fn)
    if cert.is_intersection_function:
        raise NotApplicable(
            f"psi^{{p-1}} is certified as an intersection function at "
            f"p = {p}; the comparison theorem applies and no counterexample "
            "exists"
        )
    if cert.verdict == "inconclusive":
        raise ConstructionFailed(
            "certification of psi^{p-1} is inconclusive; no negative window "
            "to target"
        )
    failing = [d for d, c in enumerate(cert.per_direction)
               if c.verdict == "not-positive-definite"]
    d_star = min(failing,
                 key=lambda d: cert.per_direction[d].witness_value)
    c_star = cert.per_direction[d_star]
    omega, mhat = c_star.transform_data
    t_star, half = _negative_window(omega, mhat, float(c_star.witness_point))
    grid = psi.grid
    radial_case = len(cert.per_direction) == 1
    if radial_case:
        cap_spec = HarmonicSpectrum(0, np.array([math.sqrt(4.0 * math.pi)]))
    else:
        nu = cert.directions[d_star]
        cap_spec = _angular_cap_spectrum(nu, grid, power=6)

    # lattice search for the most negative int w h
    best = None
    for t0 in (t_star, 0.85 * t_star, 1.15 * t_star):
        for sigma in (half / 2.0, half / 3.0, half):
            if sigma <= 0.0:
                continue
            h = _bump_profile_from_sinogram(t0, sigma, cap_spec, grid)
            ip = _integral_against(w_fn, h)
            if best is None or ip < best[0]:
                best = (ip, h, t0, sigma)
    ip, h, t0, sigma = best
    if ip >= 0.0:
        raise ConstructionFailed(
            f"no bump in the search lattice achieves int psi^{{p-1}} h < 0 "
            f"(best {ip:.3e}; window center {t_star:.3f}, half-width "
            f"{half:.3f})"
        )

    # eta: keep phi >= 0, then insist on a strict norm gap
    n_chk = 512
    r_chk = np.linspace(0.0, psi.terms[0][0].r_max, n_chk)
    psi_vals = psi.values_polar(r_chk)
    h_vals = h.values_polar(r_chk)
    pos = h_vals > 1e-12 * np.max(np.abs(h_vals))
    eta = 0.5 * float(np.min(psi_vals[pos] / h_vals[pos]))
    lp_psi = lp_norm_rn(psi, p)
    phi = None
    gap = -np.inf
    for _ in range(max_halvings + 1):
        cand = _combine(psi, h, -eta)
        if cand.min_on_sample_grid(n_chk) >= -rel_tol * float(
                np.max(np.abs(psi_vals))):
            lp_phi = lp_norm_rn(cand, p)
            gap = lp_phi ** p - lp_psi ** p
            if gap > gap_tol:
                phi = cand
                break
        eta *= 0.5
    if phi is None:
        raise ConstructionFailed(
            f"norm gap stayed <= {gap_tol:.0e} after {max_halvings} halvings "
            f"(last gap {gap:.3e}, eta {eta:.3e}, int w h {ip:.3e})"
        )
    r_phi, r_psi = _sinogram_pair(phi, psi)
    margin = sinogram_dominates(r_phi, r_psi)
    scale = max(float(np.max(np.abs(r_psi.values))), 1e-300)
    if margin < -rel_tol * scale:
        raise ConstructionFailed(
            f"constructed phi violates sinogram domination (margin "
            f"{margin:.3e}); bump parameters t0={t0:.3f} sigma={sigma:.3f}"
        )
    report = RnComparisonReport(
        p=p, domination_margin=margin, certificate=cert,
        lp_phi=lp_phi, lp_psi=lp_psi,
        conclusion_holds=False, hypothesis_holds=False,
        chain={"eta": eta, "bump_pairing": ip, "norm_gap": gap,
               "bump_center": t0, "bump_width": sigma,
               "n_failing_directions": float(len(failing))},
        notes="counterexample: domination holds while |phi|_p > |psi|_p",
    )
    return phi, report
