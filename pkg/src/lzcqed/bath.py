"""Bath-derived coefficients of the master equation.

Everything the Ohmic environment contributes enters through a handful of
scalars: the momentum diffusion coefficient, the (renormalized) cross
diffusion, the qubit-dependent force on the oscillator, and the complex
eigenvalue data of the damped-oscillator Liouvillian.  The oscillatory
response functions used in the Heisenberg-operator derivation are kept as
utilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .params import DxpPolicy, ValidatedParams


def coth(x: float) -> float:
    """Hyperbolic cotangent, accurate for large arguments."""
    return 1.0 / math.tanh(x)


def _x_coth_half(x: float, temperature: float) -> float:
    """x * coth(x / 2T), even in x; equals |x| at T = 0 and 2T at x = 0."""
    if temperature == 0.0:
        return abs(x)
    w = x / (2.0 * temperature)
    if w == 0.0:
        return 2.0 * temperature
    return x / math.tanh(w)


def dpp(temperature: float, omega: float = 1.0) -> float:
    """Momentum diffusion coefficient coth(omega / 2 kB T); 1 at T = 0.

    Approaches 2 kB T / omega in the high-temperature limit and equals the
    equilibrium variance of both scaled quadratures of the oscillator.
    """
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 1.0
    return coth(omega / (2.0 * temperature))


@dataclass(frozen=True)
class MatsubaraSumResult:
    """Value of the cross-diffusion Matsubara sum plus convergence diagnostics."""

    value: float
    converged: bool
    residual_estimate: float


def dxp_matsubara(temperature: float, drude_cutoff: float, terms: int,
                  omega: float = 1.0) -> MatsubaraSumResult:
    """Cross-diffusion coefficient from the Drude-regularized Matsubara sum.

    D_xp = nu_1 wD^2 / (2 (wD^2 + omega^2)) * sum_n (omega^2 - nu_n wD) /
    ((nu_n + wD)(nu_n^2 + omega^2)) over n = -terms..terms, nu_n = 2 pi n T.
    Symmetric pairs are combined analytically, and the slowly decaying
    1/nu_n^2 and 1/nu_n^4 tails are resummed with polygamma functions so the
    result is converged far beyond the raw truncation.
    """
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if drude_cutoff <= 0.0:
        raise ValueError(f"cutoff must be > 0, got {drude_cutoff}")
    if terms < 1:
        raise ValueError(f"need at least one Matsubara term, got {terms}")
    if temperature == 0.0:
        # nu_1 -> 0 while the sum tends to a principal-value integral that
        # vanishes; the product is zero.
        return MatsubaraSumResult(0.0, True, 0.0)

    nu1 = 2.0 * math.pi * temperature
    wd = drude_cutoff
    w2 = omega * omega

    total = 1.0 / wd  # n = 0 term: omega^2 / (wd * omega^2)
    # pair(n) + pair(-n) = 2 wd / (wd^2 - nu_n^2)
    n = np.arange(1, terms + 1, dtype=float)
    nu = nu1 * n
    pair = 2.0 * wd / (wd * wd - nu * nu)
    total += float(pair.sum())
    # analytic tails of the asymptotic expansion -2 wd / nu^2 - 2 wd^3 / nu^4 - ...
    tail2 = -2.0 * wd / nu1**2 * float(polygamma(1, terms + 1))
    tail4 = -2.0 * wd**3 / nu1**4 * float(polygamma(3, terms + 1)) / 6.0
    total += tail2 + tail4
    # next neglected order bounds the residual
    residual = abs(2.0 * wd**5 / nu1**6 * float(polygamma(5, terms + 1)) / 120.0)

    value = nu1 * wd * wd / (2.0 * (wd * wd + w2)) * total
    scale = abs(value) if value != 0.0 else 1.0
    resid_scaled = abs(nu1 * wd * wd / (2.0 * (wd * wd + w2))) * residual
    return MatsubaraSumResult(value, resid_scaled <= 1e-10 * scale, resid_scaled)


def dxp(temperature: float, drude_cutoff: float, matsubara_terms: int,
        policy: DxpPolicy, omega: float = 1.0) -> float:
    """Cross-diffusion coefficient under the chosen policy.

    Policy Zero returns 0 exactly: dropping the cross diffusion reproduces
    the correct equilibrium expectation values at every temperature, which
    is the renormalized choice used by default.
    """
    if policy is DxpPolicy.Zero:
        return 0.0
    return dxp_matsubara(temperature, drude_cutoff, matsubara_terms, omega).value


@dataclass(frozen=True)
class DiffusionCoefficients:
    """Diffusion constants entering the master equation.

    d_combined = dpp + gamma * dxp / omega is the equilibrium variance of the
    scaled position that the stationary state of the oscillator Liouvillian
    inherits; with policy Zero it equals dpp.
    """

    dpp: float
    dxp: float
    d_combined: float


def diffusion_coefficients(params: ValidatedParams) -> DiffusionCoefficients:
    """Evaluate the diffusion constants for a validated parameter set."""
    p = params
    dp = dpp(p.temperature, p.omega)
    dx = dxp(p.temperature, p.drude_cutoff, p.matsubara_terms, p.dxp_policy, p.omega)
    return DiffusionCoefficients(dp, dx, dp + p.gamma * dx / p.omega)


def dsigma(omega_j: float, temperature: float, g: float,
           omega: float = 1.0) -> float:
    """Qubit-state-dependent force coefficient on the oscillator.

    g / (2 (omega^2 - omega_j^2)) * [omega_j coth(omega_j/2T) - omega coth(omega/2T)],
    an even function of the instantaneous qubit frequency omega_j = v*t.  The
    removable singularity at |omega_j| = omega is evaluated by a local series;
    the zero-temperature limit replaces omega_j coth(...) by |omega_j|.
    """
    aw = abs(omega_j)
    if abs(aw - omega) < 1e-3 * omega:
        return _dsigma_series(aw, temperature, g, omega)
    num = _x_coth_half(omega_j, temperature) - _x_coth_half(omega, temperature)
    return g * num / (2.0 * (omega * omega - omega_j * omega_j))


def _dsigma_series(aw: float, temperature: float, g: float, omega: float) -> float:
    """Series expansion of dsigma around the removable point |omega_j| = omega."""
    u = aw - omega
    if temperature == 0.0:
        # numerator is |w| - omega exactly: dsigma = -g / (2 (|w| + omega))
        return -g / (2.0 * (aw + omega))
    b = 1.0 / (2.0 * temperature)
    c = coth(b * omega)
    s2 = 1.0 - c * c          # d coth(z)/dz = 1 - coth^2(z)
    f1 = c + omega * b * s2
    f2 = 2.0 * b * s2 - 2.0 * omega * b * b * c * s2
    f3 = -6.0 * b * b * c * s2 - 2.0 * omega * b**3 * s2 * (1.0 - 3.0 * c * c)
    h_over_u = f1 + f2 * u / 2.0 + f3 * u * u / 6.0
    return -g * h_over_u / (2.0 * (omega + aw))


def ic_is(a: float, b: float, t: float) -> tuple[float, float]:
    """Oscillatory response functions of the driven-oscillator solution.

    Ic(a,b;t) = a [cos(at) - cos(bt)] / (a^2 - b^2)
    Is(a,b;t) = [b sin(at) - a sin(bt)] / (a^2 - b^2)

    Near a = b the difference quotients are evaluated by their second-order
    series; Ic(a,a;t) = -(t/2) sin(at) and Is(a,a;t) = [a t cos(at) - sin(at)] / 2a.
    """
    if abs(a - b) < 1e-6 * max(1.0, abs(a), abs(b)):
        eps = b - a
        sin_at = math.sin(a * t)
        cos_at = math.cos(a * t)
        ic0 = -0.5 * t * sin_at
        if a != 0.0:
            ic1 = t * sin_at / (4.0 * a) - t * t * cos_at / 4.0
            is0 = (a * t * cos_at - sin_at) / (2.0 * a)
            is1 = (sin_at - a * t * cos_at) / (4.0 * a * a) - t * t * sin_at / 4.0
        else:
            # Ic(0, b; t) = Is(0, b; t) = 0 identically
            ic1 = 0.0
            is0 = 0.0
            is1 = 0.0
        return ic0 + eps * ic1, is0 + eps * is1
    denom = a * a - b * b
    ic = a * (math.cos(a * t) - math.cos(b * t)) / denom
    is_ = (b * math.sin(a * t) - a * math.sin(b * t)) / denom
    return ic, is_


@dataclass(frozen=True)
class EigenbasisSpec:
    """Eigenvalue data of the damped-oscillator Liouvillian.

    lam        complex eigenvalue -gamma/2 + i sqrt(omega^2 - gamma^2/4)
    sigma_a    coefficient D omega^2 / (lam^2 - omega^2) in the position expansion
    kappa      prefactor 1 / sqrt(1 - gamma^2 / 4 omega^2) of the ladder couplings
    d_combined equilibrium position variance defining the ground-state Gaussian
    """

    lam: complex
    sigma_a: complex
    kappa: float
    d_combined: float
    dpp: float
    gamma: float
    omega: float


def eigenbasis_spec(gamma: float, coeffs: DiffusionCoefficients,
                    omega: float = 1.0) -> EigenbasisSpec:
    """Assemble the Liouvillian eigenvalue data for damping gamma."""
    if gamma < 0.0 or gamma >= 2.0 * omega:
        raise ValueError(f"damping must satisfy 0 <= gamma < 2*omega, got {gamma}")
    lam = complex(-gamma / 2.0, math.sqrt(omega * omega - gamma * gamma / 4.0))
    kappa = 1.0 / math.sqrt(1.0 - gamma * gamma / (4.0 * omega * omega))
    sigma_a = coeffs.d_combined * omega * omega / (lam * lam - omega * omega)
    return EigenbasisSpec(lam, sigma_a, kappa, coeffs.d_combined, coeffs.dpp,
                          gamma, omega)
