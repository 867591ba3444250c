import numpy as np
import pytest

from lzcqed.analytic import pud_finite_t, standard_lz
from lzcqed.bath import DiffusionCoefficients, dpp, eigenbasis_spec
from lzcqed.fock import (FockDensityMatrix, eigenbasis_to_fock, map_to_eigenbasis,
                         redfield_propagate, thermal_occupations,
                         transition_matrix, unitary_propagate, weyl_quantize_poly)
from lzcqed.observables import observable_table
from lzcqed.params import SystemParams


def make_params(**kw):
    base = dict(g=0.04, v=0.05, gamma=0.0, temperature=0.0, n_trunc=8,
                t_start=-400.0, t_end=400.0)
    base.update(kw)
    return SystemParams(**base)


def basis(gamma=0.0, T=0.0):
    d = dpp(T)
    coeffs = DiffusionCoefficients(d, 0.0, d)
    return eigenbasis_spec(gamma, coeffs), coeffs


class TestWeylQuantization:
    def test_identity(self):
        poly = np.ones((1, 1), dtype=complex)
        op = weyl_quantize_poly(poly, 5)
        assert np.allclose(op, np.eye(5), atol=1e-14)

    def test_position_operator(self):
        poly = np.zeros((2, 1), dtype=complex)
        poly[1, 0] = 1.0  # x
        op = weyl_quantize_poly(poly, 5)
        a = np.diag(np.sqrt(np.arange(1.0, 5)), 1)
        assert np.allclose(op, a + a.T, atol=1e-14)

    def test_symmetric_xp_ordering(self):
        # x*p quantizes to (XP + PX)/2
        poly = np.zeros((2, 2), dtype=complex)
        poly[1, 1] = 1.0
        op = weyl_quantize_poly(poly, 6)
        a = np.diag(np.sqrt(np.arange(1.0, 6)), 1).astype(complex)
        x = a + a.conj().T
        p = 1j * (a.conj().T - a)
        assert np.allclose(op, 0.5 * (x @ p + p @ x), atol=1e-12)


class TestUnitaryOracle:
    @pytest.mark.slow
    def test_ground_state_survival_matches_crossing_formula(self):
        # window wide enough that the asymptotic tails sit below the
        # comparison tolerance
        p = make_params(t_start=-600.0, t_end=600.0)
        probs = unitary_propagate(0, p)
        p_up = probs[:8].sum()
        assert p_up == pytest.approx(standard_lz(2 * 0.04, 0.05), abs=1e-3)

    @pytest.mark.slow
    def test_no_go_up(self):
        p = make_params(n_trunc=10)
        mat = transition_matrix(p, initial_levels=[0, 1, 2])
        n = 10
        for col, n0 in enumerate([0, 1, 2]):
            up_probs = mat[:n, col]
            for m in range(n0 + 1, n - 1):
                assert up_probs[m] <= 1e-4, (n0, m, up_probs[m])

    def test_rejects_damped_parameters(self):
        with pytest.raises(ValueError):
            unitary_propagate(0, make_params(gamma=0.1))


class TestRedfieldOracle:
    @pytest.mark.slow
    def test_damped_oscillator_relaxes_to_thermal_occupation(self):
        # g = 0: seeded in |1><1|, the oscillator relaxes to <n> = 1/(e^2 - 1)
        p = make_params(g=0.0, gamma=0.01, temperature=0.5, n_trunc=6,
                        t_start=-500.0, t_end=500.0)
        n = 6
        rho0 = np.zeros((2 * n, 2 * n), dtype=complex)
        rho0[1, 1] = 1.0  # |up, 1>
        times, mats = redfield_propagate(p, initial=rho0, n_samples=2000)
        occ = np.arange(n, dtype=float)
        final = mats[-1]
        n_avg = float((np.diag(final.block(0, 0)).real * occ).sum())
        assert n_avg == pytest.approx(1.0 / (np.exp(2.0) - 1.0), abs=2e-4)
        # qubit stays up throughout at g = 0
        pu, pd = final.qubit_populations()
        assert pu == pytest.approx(1.0, abs=1e-9)
        assert pd == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.slow
    def test_trace_and_hermiticity_preserved(self):
        p = make_params(gamma=0.01, temperature=0.5, n_trunc=6)
        times, mats = redfield_propagate(p, n_samples=2000)
        for m in mats[:: len(mats) // 7]:
            assert abs(np.trace(m.rho).real - 1.0) < 1e-9
            assert np.abs(m.rho - m.rho.conj().T).max() < 1e-9

    def test_size_guard(self):
        with pytest.raises(ValueError):
            redfield_propagate(make_params(n_trunc=16))


class TestEigenbasisBridge:
    def test_thermal_state_maps_to_single_coefficient(self):
        # Fock space large enough that the truncated thermal tail sits below
        # the assertion scale
        T = 0.5
        spec, coeffs = basis(0.0, T)
        n = 18
        rho = np.zeros((2 * n, 2 * n), dtype=complex)
        rho[:n, :n] = np.diag(thermal_occupations(T, n))
        c = map_to_eigenbasis(FockDensityMatrix(rho, 0.0), spec, coeffs, 5)
        assert c.coeffs[0, 0, 0, 0] == pytest.approx(1.0, abs=1e-10)
        rest = c.coeffs.copy()
        rest[0, 0, 0, 0] = 0.0
        assert np.abs(rest).max() < 1e-8

    def test_roundtrip_populations(self):
        # random low-support rho: populations via the eigenbasis expansion
        # must reproduce the matrix diagonal
        T = 0.5
        spec, coeffs = basis(0.01, T)
        n_osc, n_sup, n_tr = 8, 3, 14
        rng = np.random.default_rng(11)
        m = np.zeros((2 * n_osc, 2 * n_osc), dtype=complex)
        for bi in range(2):
            blk = rng.normal(size=(n_sup, n_sup)) + 1j * rng.normal(size=(n_sup, n_sup))
            m[bi * n_osc:bi * n_osc + n_sup, bi * n_osc:bi * n_osc + n_sup] = blk
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        fdm = FockDensityMatrix(rho, 0.0)
        c = map_to_eigenbasis(fdm, spec, coeffs, n_tr)
        table = observable_table(spec, coeffs, n_tr, 4)
        for spin in (0, 1):
            for k in range(5):
                expect = fdm.fock_population(spin, k)
                got = table.fock_population(c.coeffs, spin, k)
                assert got == pytest.approx(expect, abs=1e-6), (spin, k)

    def test_mapping_linear(self):
        spec, coeffs = basis(0.02, 0.3)
        n = 6
        rng = np.random.default_rng(5)
        r1 = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
        r2 = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
        a, b = 0.7, -1.3 + 0.2j
        c1 = map_to_eigenbasis(FockDensityMatrix(r1, 0.0), spec, coeffs, 4).coeffs
        c2 = map_to_eigenbasis(FockDensityMatrix(r2, 0.0), spec, coeffs, 4).coeffs
        c12 = map_to_eigenbasis(FockDensityMatrix(a * r1 + b * r2, 0.0),
                                spec, coeffs, 4).coeffs
        assert np.abs(c12 - (a * c1 + b * c2)).max() < 1e-12

    def test_reconstruction_inverts_mapping(self):
        # coefficients -> Fock matrix -> coefficients is the identity
        spec, coeffs = basis(0.01, 0.4)
        rng = np.random.default_rng(7)
        c0 = rng.normal(size=(3, 3, 2, 2)) + 1j * rng.normal(size=(3, 3, 2, 2))
        from lzcqed.phasespace import CoefficientState
        state = CoefficientState(c0.astype(complex), 0.0)
        fdm = eigenbasis_to_fock(state, spec, coeffs, n_osc=14)
        back = map_to_eigenbasis(fdm, spec, coeffs, 3)
        assert np.abs(back.coeffs - state.coeffs).max() < 1e-6

    @pytest.mark.slow
    def test_thermal_average_of_unitary_outcomes_matches_closed_form(self):
        # thermal average over initial Fock levels reproduces the finite-T
        # formula within the independent-crossing accuracy
        T = 0.5
        p = make_params(v=0.05, n_trunc=10, temperature=T,
                        t_start=-600.0, t_end=600.0)
        occ = thermal_occupations(T, 6)
        mat = transition_matrix(p, initial_levels=list(range(6)))
        p_up_final = mat[:10, :].sum(axis=0)
        p_flip = 1.0 - float(np.dot(occ, p_up_final))
        assert p_flip == pytest.approx(pud_finite_t(0.04, 0.05, T), abs=0.01)
