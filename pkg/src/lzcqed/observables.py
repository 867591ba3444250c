"""Eigenfunctions of the damped-oscillator Liouvillian and expectation values.

Phase-space conventions used everywhere in this package:

* x is the Weyl variable of the scaled position X = a + a†, p that of
  P = i(a† - a), so [X, P] = 2i and the vacuum has <x^2> = <p^2> = 1.
* Wigner functions integrate to the trace; Weyl symbols pair with them as
  tr(A rho) = int A_W * W_rho dx dp, so the symbol of the identity is 1 and
  the symbol of the vacuum projector is 2 exp(-(x^2+p^2)/2).

The right eigenfunctions are polynomials times the stationary Gaussian,
generated by repeated application of the raising operator
d_x + (lam/omega) d_p; the left eigenfunctions are plain polynomials
generated by the transposed lowering operator acting on 1.  The two families
are biorthonormal, which is what makes coefficient extraction and
expectation values straightforward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_laguerre

from .bath import DiffusionCoefficients, EigenbasisSpec

# ---------------------------------------------------------------------------
# bivariate polynomials: coeffs[a, b] multiplies x^a p^b


def poly_zero() -> np.ndarray:
    return np.zeros((1, 1), dtype=complex)


def poly_one() -> np.ndarray:
    return np.ones((1, 1), dtype=complex)


def _pad(P: np.ndarray, na: int, nb: int) -> np.ndarray:
    out = np.zeros((na, nb), dtype=complex)
    out[: P.shape[0], : P.shape[1]] = P
    return out


def poly_add(*Ps: np.ndarray) -> np.ndarray:
    na = max(P.shape[0] for P in Ps)
    nb = max(P.shape[1] for P in Ps)
    out = np.zeros((na, nb), dtype=complex)
    for P in Ps:
        out[: P.shape[0], : P.shape[1]] += P
    return out


def poly_mul_x(P: np.ndarray) -> np.ndarray:
    out = np.zeros((P.shape[0] + 1, P.shape[1]), dtype=complex)
    out[1:, :] = P
    return out


def poly_mul_p(P: np.ndarray) -> np.ndarray:
    out = np.zeros((P.shape[0], P.shape[1] + 1), dtype=complex)
    out[:, 1:] = P
    return out


def poly_dx(P: np.ndarray) -> np.ndarray:
    if P.shape[0] == 1:
        return poly_zero()
    return P[1:, :] * np.arange(1, P.shape[0])[:, None]


def poly_dp(P: np.ndarray) -> np.ndarray:
    if P.shape[1] == 1:
        return poly_zero()
    return P[:, 1:] * np.arange(1, P.shape[1])[None, :]


def poly_degree(P: np.ndarray) -> int:
    nz = np.argwhere(np.abs(P) > 1e-300)
    if nz.size == 0:
        return 0
    return int((nz[:, 0] + nz[:, 1]).max())


def poly_eval(P: np.ndarray, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Evaluate with Horner in both variables; x and p broadcast together."""
    x = np.asarray(x)
    p = np.asarray(p)
    res = np.zeros(np.broadcast(x, p).shape, dtype=complex)
    for arow in P[::-1]:
        inner = np.zeros_like(res)
        for c in arow[::-1]:
            inner = inner * p + c
        res = res * x + inner
    return res


# ---------------------------------------------------------------------------
# eigenfunctions


@dataclass(frozen=True)
class PhasePolynomialGaussian:
    """A polynomial times the stationary Gaussian of the oscillator Liouvillian.

    The Gaussian is exp(-x^2/2 sx2 - p^2/2 sp2)/(2 pi sqrt(sx2 sp2)), with
    sx2 = D (the combined diffusion constant) and sp2 = dpp.
    """

    poly: np.ndarray
    sigma_x2: float
    sigma_p2: float

    def __call__(self, x, p):
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        norm = 1.0 / (2.0 * np.pi * np.sqrt(self.sigma_x2 * self.sigma_p2))
        gauss = np.exp(-x * x / (2.0 * self.sigma_x2) - p * p / (2.0 * self.sigma_p2))
        return poly_eval(self.poly, x, p) * gauss * norm


def _raise_poly(P: np.ndarray, lam_over_om: complex,
                sx2: float, sp2: float) -> np.ndarray:
    """Apply (d_x + (lam/om) d_p) to P * Gaussian, returning the new polynomial."""
    return poly_add(poly_dx(P), lam_over_om * poly_dp(P),
                    (-1.0 / sx2) * poly_mul_x(P),
                    (-lam_over_om / sp2) * poly_mul_p(P))


def right_eigenfunction(n: int, n_prime: int, spec: EigenbasisSpec,
                        coeffs: DiffusionCoefficients) -> PhasePolynomialGaussian:
    """phi_{nn'} = (1/n! n'!) (c+)^n (c+*)^{n'} phi_00.

    phi_00 is the stationary Gaussian; each raising operator lifts the
    polynomial degree by one, so deg(phi_{nn'}) = n + n'.
    """
    if n < 0 or n_prime < 0:
        raise ValueError("eigenfunction indices must be >= 0")
    sx2 = coeffs.d_combined
    sp2 = coeffs.dpp
    lam_over_om = spec.lam / spec.omega
    P = poly_one()
    for _ in range(n):
        P = _raise_poly(P, lam_over_om, sx2, sp2)
    for _ in range(n_prime):
        P = _raise_poly(P, np.conj(lam_over_om), sx2, sp2)
    P = P / (math.factorial(n) * math.factorial(n_prime))
    return PhasePolynomialGaussian(P, sx2, sp2)


def _lower_transpose_poly(P: np.ndarray, lam: complex, spec: EigenbasisSpec,
                          coeffs: DiffusionCoefficients) -> np.ndarray:
    """Apply the transposed lowering operator to a bare polynomial.

    c = N (D d_x - (lam/om) dpp d_p + x - (lam/om) p) with N = om^2/(lam^2-om^2);
    the transpose under int f g flips the derivative signs.
    """
    om = spec.omega
    N = om * om / (lam * lam - om * om)
    return N * poly_add((-coeffs.d_combined) * poly_dx(P),
                        (lam / om) * coeffs.dpp * poly_dp(P),
                        poly_mul_x(P),
                        (-lam / om) * poly_mul_p(P))


def left_eigenfunction(n: int, n_prime: int, spec: EigenbasisSpec,
                       coeffs: DiffusionCoefficients) -> np.ndarray:
    """psi_{nn'}: the polynomial biorthonormal to phi_{nn'}.

    Generated by the transposed lowering operators acting on 1; psi_00 = 1,
    and int psi_{mm'} phi_{nn'} dx dp = delta_{nm} delta_{n'm'}.
    """
    if n < 0 or n_prime < 0:
        raise ValueError("eigenfunction indices must be >= 0")
    P = poly_one()
    for _ in range(n):
        P = _lower_transpose_poly(P, spec.lam, spec, coeffs)
    for _ in range(n_prime):
        P = _lower_transpose_poly(P, np.conj(spec.lam), spec, coeffs)
    return P


def liouvillian_apply(f: PhasePolynomialGaussian, spec: EigenbasisSpec,
                      coeffs: DiffusionCoefficients) -> PhasePolynomialGaussian:
    """Apply the full oscillator Liouvillian to a polynomial-times-Gaussian.

    L = om (x d_p - p d_x) + gamma d_p p + gamma dpp d_p^2 - gamma dxp d_x d_p,
    which maps the representation to itself exactly.  Used by tests to verify
    the eigenvalue relation without discretization error.
    """
    om, gamma = spec.omega, spec.gamma
    sx2, sp2 = f.sigma_x2, f.sigma_p2
    P = f.poly

    def dx(Q):
        return poly_add(poly_dx(Q), (-1.0 / sx2) * poly_mul_x(Q))

    def dp(Q):
        return poly_add(poly_dp(Q), (-1.0 / sp2) * poly_mul_p(Q))

    out = poly_add(om * poly_mul_x(dp(P)), (-om) * poly_mul_p(dx(P)),
                   gamma * dp(poly_mul_p(P)),
                   gamma * coeffs.dpp * dp(dp(P)))
    if coeffs.dxp != 0.0:
        out = poly_add(out, (-gamma * coeffs.dxp) * dx(dp(P)))
    return PhasePolynomialGaussian(out, sx2, sp2)


# ---------------------------------------------------------------------------
# quadrature and Weyl weights


def gauss_hermite_nodes(order: int, sigma_x2: float, sigma_p2: float):
    """2-D Gauss-Hermite grid matched to a Gaussian with variances (sx2, sp2).

    Returns (x, p, w) flattened arrays such that sum w f(x,p) approximates
    int f(x,p) exp(-x^2/2sx2 - p^2/2sp2) / (2 pi sqrt(sx2 sp2)) dx dp.
    """
    t, wt = np.polynomial.hermite.hermgauss(order)
    xs = t * np.sqrt(2.0 * sigma_x2)
    ps = t * np.sqrt(2.0 * sigma_p2)
    wx = wt / np.sqrt(np.pi)
    X, Pp = np.meshgrid(xs, ps, indexing="ij")
    W = np.outer(wx, wx)
    return X.ravel(), Pp.ravel(), W.ravel()


class QuadratureError(RuntimeError):
    """Raised when doubling the quadrature order fails to stabilize a weight."""


def weyl_weight(observable_symbol, n: int, n_prime: int, spec: EigenbasisSpec,
                coeffs: DiffusionCoefficients, *, order: int = 24,
                tol: float = 1e-10, max_order: int = 200) -> complex:
    """Weight O_{nn'} = int O(x,p) phi_{nn'}(x,p) dx dp of a phase-space symbol.

    Uses 2-D Gauss-Hermite quadrature matched to the phi_00 widths, doubling
    the order until the result moves by less than tol.
    """
    phi = right_eigenfunction(n, n_prime, spec, coeffs)

    def estimate(k):
        x, p, w = gauss_hermite_nodes(k, phi.sigma_x2, phi.sigma_p2)
        vals = np.asarray(observable_symbol(x, p), dtype=complex)
        polys = poly_eval(phi.poly, x, p)
        return complex(np.sum(w * vals * polys))

    prev = estimate(order)
    k = order
    while k < max_order:
        k *= 2
        cur = estimate(k)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"weight ({n},{n_prime}) did not stabilize to {tol} below order {max_order}")


def fock_projector_symbol(k: int):
    """Weyl symbol of the Fock projector |k><k|: 2 (-1)^k L_k(x^2+p^2) e^{-(x^2+p^2)/2}.

    Validated against the Fock-basis solvers rather than taken on faith; see
    the mapping round-trip tests.
    """
    if k < 0:
        raise ValueError(f"Fock index must be >= 0, got {k}")

    def symbol(x, p):
        s2 = np.asarray(x) ** 2 + np.asarray(p) ** 2
        return 2.0 * (-1.0) ** k * eval_laguerre(k, s2) * np.exp(-s2 / 2.0)

    return symbol


class ObservableTable:
    """Precomputed Fock-projector weights for a given eigenbasis.

    Computed once per parameter set and then read-only, so concurrent readers
    are safe.  Supports Fock indices up to n_fock_max (quadrature reliability
    degrades for large indices; 8 is the supported ceiling).
    """

    SUPPORTED_MAX = 8

    def __init__(self, spec: EigenbasisSpec, coeffs: DiffusionCoefficients,
                 n_trunc: int, n_fock_max: int = 2):
        if n_fock_max > self.SUPPORTED_MAX:
            raise ValueError(f"Fock populations supported only up to "
                             f"{self.SUPPORTED_MAX}, requested {n_fock_max}")
        self.spec = spec
        self.coeffs = coeffs
        self.n_trunc = n_trunc
        self.n_fock_max = n_fock_max
        # weights[k][n, n'] = int W_k phi_{nn'}
        self.weights = np.empty((n_fock_max + 1, n_trunc, n_trunc), dtype=complex)
        for k in range(n_fock_max + 1):
            sym = fock_projector_symbol(k)
            for n in range(n_trunc):
                for m in range(n_trunc):
                    self.weights[k, n, m] = weyl_weight(sym, n, m, spec, coeffs)

    def fock_population(self, state, spin: int, n_fock: int) -> float:
        """Population of |spin, n_fock> from a coefficient state.

        spin is 0 for up, 1 for down.  The result is real up to roundoff and
        may undershoot 0 or overshoot 1 by a small Redfield-typical margin.
        """
        if n_fock > self.n_fock_max:
            raise ValueError(f"table holds Fock weights up to {self.n_fock_max}")
        c = state.coeffs if hasattr(state, "coeffs") else state
        block = c[:, :, spin, spin]
        val = np.sum(self.weights[n_fock] * block)
        return float(val.real)


@lru_cache(maxsize=32)
def observable_table(spec: EigenbasisSpec, coeffs: DiffusionCoefficients,
                     n_trunc: int, n_fock_max: int = 2) -> ObservableTable:
    """Memoized ObservableTable constructor (tables are expensive to build)."""
    return ObservableTable(spec, coeffs, n_trunc, n_fock_max)
