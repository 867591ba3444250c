"""Closed-form results for Landau-Zener sweeps of the qubit-oscillator model.

These expressions serve as reference oracles for the dynamical solvers:
the undamped flip probability, the standard two-level crossing formula and
its composition over independent crossings, the thermally averaged flip
probability in closed form, and the exact zero-temperature result for the
damped oscillator obtained from the effective spin-boson mapping.

All probabilities refer to a sweep of the qubit bias from -infinity to
+infinity at velocity v, with the qubit starting in its ground state |up>.
"""

from __future__ import annotations

import math


def _require_positive_velocity(v: float) -> None:
    if v <= 0.0:
        raise ValueError(f"sweep velocity must be > 0, got {v}")


def standard_lz(delta: float, v: float) -> float:
    """Probability of a diabatic (non-adiabatic) passage through one crossing.

    w(delta) = exp(-pi delta^2 / 2 v) for a two-level crossing with splitting
    delta swept at velocity v.  w = 1 at zero gap.
    """
    _require_positive_velocity(v)
    if delta < 0.0:
        raise ValueError(f"splitting must be >= 0, got {delta}")
    return math.exp(-math.pi * delta * delta / (2.0 * v))


def lz_generalized(g: float, v: float) -> float:
    """Exact qubit-flip probability for the full qubit-oscillator sweep at T = 0.

    P = 1 - exp(-2 pi g^2 / v).  Holds for arbitrary coupling strength, not
    just in the independent-crossing regime.
    """
    _require_positive_velocity(v)
    return -math.expm1(-2.0 * math.pi * g * g / v)


def crossing_splitting(n: int, g: float) -> float:
    """Level splitting of the avoided crossing joining oscillator levels n and n+1."""
    if n < 0:
        raise ValueError(f"oscillator index must be >= 0, got {n}")
    return 2.0 * g * math.sqrt(n + 1.0)


def path_prob_up(n: int, g: float, v: float) -> float:
    """Probability that |up, n> ends with the qubit still up, crossings independent.

    Two connecting paths exist: diabatic at both crossings, or adiabatic at
    both (down one oscillator level and back up).  For n = 0 the second path
    does not exist and the survival probability is w(2g) alone.
    """
    if n < 0:
        raise ValueError(f"oscillator index must be >= 0, got {n}")
    _require_positive_velocity(v)
    stay = standard_lz(2.0 * g * math.sqrt(n), v) * standard_lz(2.0 * g * math.sqrt(n + 1), v)
    if n == 0:
        return stay
    hop = (1.0 - standard_lz(2.0 * g * math.sqrt(n), v)) \
        * (1.0 - standard_lz(2.0 * g * math.sqrt(n - 1), v))
    return stay + hop


def default_thermal_n_max(temperature: float) -> int:
    """Boltzmann-tail truncation leaving a residual below ~1e-17."""
    return int(math.ceil(40.0 * temperature)) + 10


def thermal_avg_direct(g: float, v: float, temperature: float,
                       n_max: int | None = None) -> float:
    """Flip probability as a brute-force thermal average over initial Fock states.

    1 - sum_n p_n P(up,n -> up) with geometric weights p_n = e^{-n/T}(1 - e^{-1/T}).
    At T = 0 only n = 0 contributes.
    """
    _require_positive_velocity(v)
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 1.0 - path_prob_up(0, g, v)
    if n_max is None:
        n_max = default_thermal_n_max(temperature)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    r = math.exp(-1.0 / temperature)
    norm = 1.0 - r
    total = 0.0
    weight = norm
    for n in range(n_max + 1):
        total += weight * path_prob_up(n, g, v)
        weight *= r
    return 1.0 - total


def b_function(x: float, temperature: float) -> float:
    """Thermal weight factor B(x) = (1 - e^{-1/T}) / (1 - e^{-(1/T + 2 pi x)}).

    B = 1 at zero temperature or at x = 0; for x > 0 it vanishes in the
    high-temperature limit.
    """
    if x < 0.0:
        raise ValueError(f"argument must be >= 0, got {x}")
    if temperature == 0.0 or x == 0.0:
        return 1.0
    beta = 1.0 / temperature
    return math.expm1(-beta) / math.expm1(-(beta + 2.0 * math.pi * x))


def pud_finite_t(g: float, v: float, temperature: float) -> float:
    """Closed-form flip probability for a thermal initial state (no damping).

    P = B(g^2/v) - B(2g^2/v) e^{-2 pi g^2/v} + [B(g^2/v) - B(2g^2/v)] e^{+2 pi g^2/v}

    Reduces to the T = 0 result 1 - e^{-2 pi g^2/v}, and agrees with the
    brute-force thermal average of the independent-crossing path
    probabilities (an algebraic identity of the geometric series).
    """
    _require_positive_velocity(v)
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    x = g * g / v
    b1 = b_function(x, temperature)
    b2 = b_function(2.0 * x, temperature)
    e = math.exp(-2.0 * math.pi * x)
    return b1 - b2 * e + (b1 - b2) / e


def alpha_effective(g: float, gamma: float, omega: float = 1.0) -> float:
    """Conventional effective Ohmic coupling strength: (4/pi) g^2 gamma / omega^3.

    Quoted for reference in the usual spin-boson convention.  Note that the
    spectral density below is normalized by its total-weight identity with
    sum_ck2 rather than through this constant; the two conventions differ by
    a fixed numerical factor tied to the quadrature scaling of X = a + a+.
    """
    return 4.0 / math.pi * (g * g / omega**3) * gamma


def jeff_spectral_density(omega_arg: float, g: float, gamma: float,
                          omega: float = 1.0) -> float:
    """Effective bath spectral density seen by the qubit through the oscillator.

    A Lorentzian-broadened peak at the oscillator frequency,

        J_eff(w) = (g^2 gamma sqrt(4 omega^2 - gamma^2) / pi)
                   * w / [(omega^2 - w^2)^2 + (gamma w)^2],

    normalized so that the total coupling weight obeys
    int_0^inf J_eff dw = g^2 * sum_ck2(gamma) exactly.  For gamma << omega
    this coincides with the damped-oscillator response-function form.
    """
    if omega_arg < 0.0:
        raise ValueError(f"frequency must be >= 0, got {omega_arg}")
    if gamma < 0.0 or gamma >= 2.0 * omega:
        raise ValueError(f"damping must satisfy 0 <= gamma < 2*omega, got {gamma}")
    c = g * g * gamma * math.sqrt(4.0 * omega**2 - gamma**2) / math.pi
    denom = (omega**2 - omega_arg**2) ** 2 + (gamma * omega_arg) ** 2
    return c * omega_arg / denom


def sum_ck2(gamma: float, omega: float = 1.0) -> float:
    """Total effective-mode coupling weight of the damped oscillator.

    (1/pi) [arctan((2 omega^2 - gamma^2) / (gamma sqrt(4 omega^2 - gamma^2))) + pi/2].
    Equals 1 at gamma = 0 and decreases monotonically to 0 as gamma -> 2 omega;
    it also equals the integral of J_eff / g^2 over all frequencies.
    """
    if gamma < 0.0 or gamma >= 2.0 * omega:
        raise ValueError(f"damping must satisfy 0 <= gamma < 2*omega, got {gamma}")
    if gamma == 0.0:
        return 1.0
    arg = (2.0 * omega**2 - gamma**2) / (gamma * math.sqrt(4.0 * omega**2 - gamma**2))
    return (math.atan(arg) + math.pi / 2.0) / math.pi


def pud_zero_t_dissipative(g: float, v: float, gamma: float,
                           omega: float = 1.0) -> float:
    """Exact zero-temperature flip probability with oscillator damping.

    P = 1 - exp(-2 pi g^2 sum_ck2(gamma) / v): damping reduces the total
    coupling weight and with it the flip probability.
    """
    _require_positive_velocity(v)
    s = sum_ck2(gamma, omega)
    return -math.expm1(-2.0 * math.pi * g * g * s / v)
