"""Brute-force reference solvers in the truncated Fock basis.

These deliberately share no code with the eigenbasis solver: the Hamiltonian
and dissipators are built as explicit matrices over the product basis
{|up,0..N-1>, |down,0..N-1>} and propagated directly, so agreement between
the two routes is evidence rather than tautology.

The master equation integrated here (scaled position X = a + a†,
velocity Xdot = i omega (a† - a)):

    drho/dt = -i [H, rho]
              - i (gamma / 4 omega) [X, [Xdot, rho]_+]
              - (gamma / 4) Dpp [X, [X, rho]]
              - (gamma / 4 omega) Dxp [X, [Xdot, rho]]
              + gamma Dsigma(v t) [X, [sx, rho]]

with H = (v t / 2) sz + g sx X + omega a† a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._dopri import StepSizeUnderflow, integrate_dopri5
from .bath import (DiffusionCoefficients, EigenbasisSpec, dsigma, dpp as dpp_fn,
                   dxp as dxp_fn)
from .observables import (gauss_hermite_nodes, left_eigenfunction, poly_add,
                          poly_dp, poly_dx, poly_eval, poly_mul_p, poly_mul_x,
                          right_eigenfunction)
from .params import validate
from .phasespace import CoefficientState, SolverError

REDFIELD_N_MAX = 12


def oscillator_ops(n: int):
    """Annihilation, creation, X = a + a+, and P = i(a+ - a) on n Fock states."""
    a = np.diag(np.sqrt(np.arange(1.0, n)), 1).astype(complex)
    ad = a.conj().T
    return a, ad, a + ad, 1j * (ad - a)


_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _product_ops(n: int):
    a, ad, x, p = oscillator_ops(n)
    eye_q = np.eye(2, dtype=complex)
    eye_o = np.eye(n, dtype=complex)
    return {
        "SX": np.kron(_SX, eye_o),
        "SZ": np.kron(_SZ, eye_o),
        "X": np.kron(eye_q, x),
        "P": np.kron(eye_q, p),
        "NUM": np.kron(eye_q, ad @ a),
    }


@dataclass
class FockDensityMatrix:
    """Density matrix over {|up,0..N-1>, |down,0..N-1>} at one instant."""

    rho: np.ndarray
    t: float

    @property
    def n_osc(self) -> int:
        return self.rho.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        n = self.n_osc
        return self.rho[i * n:(i + 1) * n, j * n:(j + 1) * n]

    def qubit_populations(self) -> tuple[float, float]:
        n = self.n_osc
        return (float(np.trace(self.block(0, 0)).real),
                float(np.trace(self.block(1, 1)).real))

    def fock_population(self, spin: int, k: int) -> float:
        return float(self.block(spin, spin)[k, k].real)


def thermal_occupations(temperature: float, n: int) -> np.ndarray:
    """Boltzmann weights over n oscillator levels, renormalized in truncation."""
    if temperature == 0.0:
        w = np.zeros(n)
        w[0] = 1.0
        return w
    w = np.exp(-np.arange(n) / temperature)
    return w / w.sum()


def unitary_propagate(initial: int, params, *, rtol: float = 1e-13,
                      atol: float = 1e-14) -> np.ndarray:
    """Propagate one basis state through the sweep at gamma = 0.

    ``initial`` indexes the product basis (0..N-1 are |up,n>, N..2N-1 are
    |down,n>).  Returns the final probabilities |<basis|U|initial>|^2 over the
    full product basis.  Raises SolverError if the state norm drifts by more
    than 1e-8: the accumulated drift rides at roughly steps * rtol, so the
    long sweep windows need the high-order integrator at these tight
    tolerances to pass the check honestly.
    """
    from scipy.integrate import solve_ivp

    vp = validate(params)
    p = vp.params
    if p.gamma != 0.0:
        raise ValueError("unitary propagation requires gamma = 0")
    n = p.n_trunc
    ops = _product_ops(n)
    h0 = p.g * (ops["SX"] @ ops["X"]) + p.omega * ops["NUM"]
    hz = 0.5 * ops["SZ"]

    def rhs(t, y):
        return -1j * (h0 @ y + (p.v * t) * (hz @ y))

    y0 = np.zeros(2 * n, dtype=complex)
    y0[initial] = 1.0
    sol = solve_ivp(rhs, (p.t_start, p.t_end), y0, method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise SolverError(f"unitary propagation failed: {sol.message}")
    y = sol.y[:, -1]
    norm = float(np.vdot(y, y).real)
    if abs(norm - 1.0) > 1e-8:
        raise SolverError(f"norm drift {abs(norm - 1.0):.3e} exceeds 1e-8")
    return np.abs(y) ** 2


def transition_matrix(params, initial_levels) -> np.ndarray:
    """P[(spin,m), n] for sweeps starting from |up, n>, n in initial_levels."""
    cols = [unitary_propagate(n, params) for n in initial_levels]
    return np.stack(cols, axis=1)


def redfield_propagate(params, *, initial: np.ndarray | None = None,
                       n_samples: int = 2001, rtol: float = 1e-8,
                       atol: float = 1e-10):
    """Integrate the operator-form master equation; returns sampled matrices.

    The default initial state is the thermal oscillator with the qubit up.
    Returns (times, list of FockDensityMatrix).  Guarded to N <= 12: the
    density matrix has (2N)^2 complex entries and this route exists for
    cross-validation, not production runs.
    """
    vp = validate(params)
    p = vp.params
    n = p.n_trunc
    if n > REDFIELD_N_MAX:
        raise ValueError(f"Fock-basis Redfield solver is limited to "
                         f"n_trunc <= {REDFIELD_N_MAX}, got {n}")
    dpp = dpp_fn(p.temperature, p.omega)
    dxp = dxp_fn(p.temperature, p.drude_cutoff, p.matsubara_terms,
                 p.dxp_policy, p.omega)
    ops = _product_ops(n)
    SX, SZ, X, P = ops["SX"], ops["SZ"], ops["X"], ops["P"]
    h0 = p.g * (SX @ X) + p.omega * ops["NUM"]
    hz = 0.5 * SZ
    gamma, om = p.gamma, p.omega

    if initial is None:
        occ = thermal_occupations(p.temperature, n)
        rho0 = np.zeros((2 * n, 2 * n), dtype=complex)
        rho0[:n, :n] = np.diag(occ)
    else:
        rho0 = np.asarray(initial, dtype=complex)

    dim = 2 * n

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        h = h0 + (p.v * t) * hz
        out = -1j * (h @ rho - rho @ h)
        if gamma != 0.0:
            anti = P @ rho + rho @ P
            out -= 1j * (gamma / 4.0) * (X @ anti - anti @ X)
            c1 = X @ rho - rho @ X
            out -= (gamma / 4.0) * dpp * (X @ c1 - c1 @ X)
            if dxp != 0.0:
                c2 = P @ rho - rho @ P
                out -= (gamma / 4.0) * dxp * (X @ c2 - c2 @ X)
            if p.g != 0.0:
                ds = dsigma(p.v * t, p.temperature, p.g, om)
                cq = SX @ rho - rho @ SX
                out += gamma * ds * (X @ cq - cq @ X)
        return out.reshape(-1)

    t_grid = np.linspace(p.t_start, p.t_end, n_samples)

    def project_hermitian(y):
        # the master equation preserves hermiticity exactly; re-project to
        # keep rounding bias from accumulating over long runs
        r = y.reshape(dim, dim)
        mirror = r.conj().T.copy()
        r += mirror
        r *= 0.5

    try:
        y_final, samples, _ = integrate_dopri5(rhs, p.t_start, p.t_end,
                                               rho0.reshape(-1), rtol=rtol,
                                               atol=atol, t_eval=t_grid,
                                               project=project_hermitian)
    except StepSizeUnderflow as exc:
        raise SolverError(f"step size underflow at t = {exc.t:.6g}") from exc

    mats = [FockDensityMatrix(samples[i].reshape(dim, dim), t_grid[i])
            for i in range(n_samples)]
    for m in (mats[0], mats[-1]):
        herm = np.abs(m.rho - m.rho.conj().T).max()
        tr = abs(np.trace(m.rho).real - 1.0)
        if herm > 1e-9 * 10 or tr > 1e-8:
            raise SolverError(f"invariant breach at t = {m.t:.6g}: "
                              f"hermiticity {herm:.2e}, trace {tr:.2e}")
    return t_grid, mats


# ---------------------------------------------------------------------------
# Weyl quantization and the bridge into the eigenbasis


def weyl_quantize_poly(poly: np.ndarray, n_fock: int) -> np.ndarray:
    """Weyl (symmetric) quantization of a polynomial in (x, p).

    Uses the exact recursions Q(x f) = (X Q(f) + Q(f) X)/2 and
    Q(p f) = (P Q(f) + Q(f) P)/2, built in an enlarged Fock space so the
    returned n_fock x n_fock block is free of truncation artifacts.
    """
    deg = poly.shape[0] + poly.shape[1]
    n_big = n_fock + deg + 2
    _, _, x_op, p_op = oscillator_ops(n_big)
    cache: dict[tuple[int, int], np.ndarray] = {}

    def mono(ax: int, bp: int) -> np.ndarray:
        key = (ax, bp)
        if key in cache:
            return cache[key]
        if ax == 0 and bp == 0:
            m = np.eye(n_big, dtype=complex)
        elif ax > 0:
            inner = mono(ax - 1, bp)
            m = 0.5 * (x_op @ inner + inner @ x_op)
        else:
            inner = mono(ax, bp - 1)
            m = 0.5 * (p_op @ inner + inner @ p_op)
        cache[key] = m
        return m

    out = np.zeros((n_big, n_big), dtype=complex)
    for ax in range(poly.shape[0]):
        for bp in range(poly.shape[1]):
            c = poly[ax, bp]
            if c != 0.0:
                out += c * mono(ax, bp)
    return out[:n_fock, :n_fock]


def fock_dyad_symbol_poly(m: int, m_prime: int) -> np.ndarray:
    """Polynomial part of the Weyl symbol of |m><m'| (times e^{-(x^2+p^2)/2}).

    Built by the ladder recursion from the vacuum symbol 2 e^{-(x^2+p^2)/2}:
    left multiplication by a+ and right multiplication by a act on the
    polynomial part as first-order differential operators.
    """
    P = 2.0 * np.ones((1, 1), dtype=complex)

    def dx_g(Q):  # d/dx acting on Q * e^{-(x^2+p^2)/2}
        return poly_add(poly_dx(Q), -poly_mul_x(Q))

    def dp_g(Q):
        return poly_add(poly_dp(Q), -poly_mul_p(Q))

    def adag_left(Q):
        # symbol((X - iP)/2 A) = [(x - i p) - d_x + i d_p] symbol(A) / 2
        return 0.5 * poly_add(poly_mul_x(Q), -1j * poly_mul_p(Q),
                              -dx_g(Q), 1j * dp_g(Q))

    def a_right(Q):
        # symbol(A (X + iP)/2) = [(x + i p) - d_x - i d_p] symbol(A) / 2
        return 0.5 * poly_add(poly_mul_x(Q), 1j * poly_mul_p(Q),
                              -dx_g(Q), -1j * dp_g(Q))

    for _ in range(m):
        P = adag_left(P)
    for _ in range(m_prime):
        P = a_right(P)
    return P / math.sqrt(math.factorial(m) * math.factorial(m_prime))


def map_to_eigenbasis(rho: FockDensityMatrix, spec: EigenbasisSpec,
                      coeffs: DiffusionCoefficients,
                      n_trunc: int | None = None) -> CoefficientState:
    """Expand a Fock-basis density matrix in the Liouvillian eigenbasis.

    c_{nn'}^{ij} = tr(Psi_{nn'} rho_ij) with Psi_{nn'} the Weyl quantization
    of the left eigenfunction polynomial; linear in rho by construction.
    """
    n_osc = rho.n_osc
    if n_trunc is None:
        n_trunc = n_osc
    c = np.zeros((n_trunc, n_trunc, 2, 2), dtype=complex)
    for n in range(n_trunc):
        for m in range(n_trunc):
            psi = left_eigenfunction(n, m, spec, coeffs)
            op = weyl_quantize_poly(psi, n_osc)
            for i in range(2):
                for j in range(2):
                    c[n, m, i, j] = np.trace(op @ rho.block(i, j))
    return CoefficientState(c, rho.t)


def eigenbasis_to_fock(state: CoefficientState, spec: EigenbasisSpec,
                       coeffs: DiffusionCoefficients, n_osc: int,
                       *, quad_order: int = 80) -> FockDensityMatrix:
    """Reconstruct the Fock-basis density matrix from expansion coefficients.

    <m|rho_ij|m'> = sum_{nn'} c_{nn'}^{ij} int symbol(|m'><m|) phi_{nn'} dx dp,
    evaluated by Gauss-Hermite quadrature on the product of the two Gaussians.
    Intended for diagnostics at small n_osc.
    """
    n_trunc = state.n_trunc
    phi00 = right_eigenfunction(0, 0, spec, coeffs)
    # quadrature matched to the product Gaussian of phi (widths sx2, sp2)
    # and the dyad symbol (unit widths)
    sx2 = 1.0 / (1.0 / phi00.sigma_x2 + 1.0)
    sp2 = 1.0 / (1.0 / phi00.sigma_p2 + 1.0)
    x, p, w = gauss_hermite_nodes(quad_order, sx2, sp2)
    # undo the node-Gaussian normalization mismatch: nodes carry weight
    # exp(-x^2/2sx2-p^2/2sp2)/(2 pi sqrt(sx2 sp2)); the integrand Gaussians
    # multiply to exactly that exponential, so scale by 2 pi sqrt(sx2 sp2)
    # and the phi00 normalization.
    phi_norm = 1.0 / (2.0 * np.pi * np.sqrt(phi00.sigma_x2 * phi00.sigma_p2))
    scale = 2.0 * np.pi * np.sqrt(sx2 * sp2) * phi_norm

    phi_vals = np.empty((n_trunc, n_trunc, x.size), dtype=complex)
    for n in range(n_trunc):
        for m in range(n_trunc):
            phi_vals[n, m] = poly_eval(
                right_eigenfunction(n, m, spec, coeffs).poly, x, p)

    rho = np.zeros((2 * n_osc, 2 * n_osc), dtype=complex)
    for mm in range(n_osc):
        for mp in range(n_osc):
            sym = poly_eval(fock_dyad_symbol_poly(mp, mm), x, p)
            weights = np.tensordot(phi_vals, w * sym * scale, axes=([2], [0]))
            for i in range(2):
                for j in range(2):
                    rho[i * n_osc + mm, j * n_osc + mp] = np.sum(
                        weights * state.coeffs[:, :, i, j])
    return FockDensityMatrix(rho, state.t)
