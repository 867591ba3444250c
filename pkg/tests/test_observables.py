import numpy as np
import pytest

from lzcqed.bath import DiffusionCoefficients, dpp, eigenbasis_spec
from lzcqed.observables import (ObservableTable, fock_projector_symbol,
                                gauss_hermite_nodes, left_eigenfunction,
                                liouvillian_apply, observable_table, poly_degree,
                                poly_eval, right_eigenfunction, weyl_weight)

COTH_1 = 1.3130352854993312


def basis(gamma=0.0, T=0.0):
    d = dpp(T)
    coeffs = DiffusionCoefficients(d, 0.0, d)
    return eigenbasis_spec(gamma, coeffs), coeffs


def pair_integral(psi_poly, phi, order=40):
    """int psi * phi dx dp by Gauss-Hermite matched to the phi Gaussian."""
    x, p, w = gauss_hermite_nodes(order, phi.sigma_x2, phi.sigma_p2)
    return np.sum(w * poly_eval(psi_poly, x, p) * poly_eval(phi.poly, x, p))


class TestEigenfunctions:
    def test_ground_state_is_pure_gaussian(self):
        spec, coeffs = basis(0.01, 0.5)
        phi = right_eigenfunction(0, 0, spec, coeffs)
        assert phi.poly.shape == (1, 1)
        assert phi.poly[0, 0] == 1.0
        assert phi.sigma_x2 == pytest.approx(COTH_1, abs=1e-12)

    def test_ground_state_normalized(self):
        spec, coeffs = basis(0.1, 0.7)
        phi = right_eigenfunction(0, 0, spec, coeffs)
        x, p, w = gauss_hermite_nodes(24, phi.sigma_x2, phi.sigma_p2)
        # weights already include the Gaussian: sum w * (poly = 1) = 1
        assert np.sum(w * poly_eval(phi.poly, x, p)).real == pytest.approx(
            1.0, abs=1e-12)

    def test_left_ground_state_is_one(self):
        spec, coeffs = basis(0.05, 0.3)
        psi = left_eigenfunction(0, 0, spec, coeffs)
        assert psi.shape == (1, 1)
        assert psi[0, 0] == 1.0

    @pytest.mark.parametrize("n,m", [(1, 0), (2, 1), (3, 2), (0, 4)])
    def test_polynomial_degrees(self, n, m):
        spec, coeffs = basis(0.02, 0.4)
        assert poly_degree(right_eigenfunction(n, m, spec, coeffs).poly) == n + m
        assert poly_degree(left_eigenfunction(n, m, spec, coeffs)) == n + m

    @pytest.mark.parametrize("gamma", [0.0, 0.01, 0.1])
    def test_biorthonormality_gram_identity(self, gamma):
        # the module's master test: int psi_{mm'} phi_{nn'} = delta delta
        # for all n+n' <= 4, m+m' <= 4
        spec, coeffs = basis(gamma, 0.5)
        idx = [(n, m) for n in range(5) for m in range(5) if n + m <= 4]
        gram = np.empty((len(idx), len(idx)), dtype=complex)
        for a, (mm, mp) in enumerate(idx):
            psi = left_eigenfunction(mm, mp, spec, coeffs)
            for b, (nn, np_) in enumerate(idx):
                phi = right_eigenfunction(nn, np_, spec, coeffs)
                gram[a, b] = pair_integral(psi, phi)
        assert np.abs(gram - np.eye(len(idx))).max() < 1e-8

    @pytest.mark.parametrize("gamma", [0.0, 0.01, 0.1, 1.0])
    def test_eigenvalue_relation(self, gamma):
        # L phi_{nn'} = (n lam + n' lam*) phi_{nn'}, applied exactly in the
        # polynomial representation and checked pointwise on a grid
        spec, coeffs = basis(gamma, 0.3)
        xs = np.linspace(-4.0, 4.0, 21)
        X, P = np.meshgrid(xs, xs, indexing="ij")
        for (n, m) in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]:
            phi = right_eigenfunction(n, m, spec, coeffs)
            lphi = liouvillian_apply(phi, spec, coeffs)
            lam_nm = n * spec.lam + m * np.conj(spec.lam)
            resid = lphi(X, P) - lam_nm * phi(X, P)
            assert np.abs(resid).max() < 1e-6

    def test_eigenvalue_numeric_example(self):
        spec, _ = basis(0.02, 0.0)
        lam10 = 1 * spec.lam + 0
        assert lam10.real == pytest.approx(-0.01, abs=1e-15)
        assert lam10.imag == pytest.approx(np.sqrt(1 - 0.0001), abs=1e-12)


class TestWeylWeights:
    def test_identity_observable_projects_to_ground(self):
        spec, coeffs = basis(0.01, 0.5)

        def one(x, p):
            return np.ones_like(np.asarray(x), dtype=float)

        assert weyl_weight(one, 0, 0, spec, coeffs) == pytest.approx(1.0, abs=1e-10)
        for (n, m) in [(1, 0), (0, 1), (1, 1), (2, 2)]:
            assert weyl_weight(one, n, m, spec, coeffs) == pytest.approx(
                0.0, abs=1e-10)

    def test_vacuum_projector_on_vacuum_basis(self):
        spec, coeffs = basis(0.0, 0.0)
        sym = fock_projector_symbol(0)
        assert weyl_weight(sym, 0, 0, spec, coeffs) == pytest.approx(1.0, abs=1e-10)

    def test_position_mean_vanishes_on_ground_state(self):
        spec, coeffs = basis(0.0, 0.5)

        def position(x, p):
            return np.asarray(x, dtype=float)

        assert weyl_weight(position, 0, 0, spec, coeffs) == pytest.approx(
            0.0, abs=1e-12)

    def test_position_variance_equals_d(self):
        spec, coeffs = basis(0.0, 0.5)

        def x2(x, p):
            return np.asarray(x, dtype=float) ** 2

        assert weyl_weight(x2, 0, 0, spec, coeffs) == pytest.approx(
            COTH_1, abs=1e-10)


class TestFockPopulations:
    def make_state(self, n_trunc=6):
        c = np.zeros((n_trunc, n_trunc, 2, 2), dtype=complex)
        c[0, 0, 0, 0] = 1.0
        return c

    def test_thermal_ground_occupation(self):
        spec, coeffs = basis(0.0, 0.5)
        table = observable_table(spec, coeffs, 6, 1)
        state = self.make_state()
        p0 = table.fock_population(state, 0, 0)
        assert p0 == pytest.approx(1.0 - np.exp(-2.0), abs=1e-9)
        # spin down empty
        assert table.fock_population(state, 1, 0) == pytest.approx(0.0, abs=1e-12)

    def test_thermal_distribution_all_levels(self):
        spec, coeffs = basis(0.0, 0.5)
        table = ObservableTable(spec, coeffs, 6, 5)
        state = self.make_state()
        r = np.exp(-2.0)
        for k in range(6):
            expect = (1 - r) * r**k
            got = table.fock_population(state, 0, k) if k <= 5 else None
            if k <= 5:
                assert got == pytest.approx(expect, abs=1e-8)

    def test_completeness(self):
        spec, coeffs = basis(0.0, 0.5)
        table = ObservableTable(spec, coeffs, 6, 8)
        state = self.make_state()
        total = sum(table.fock_population(state, s, k)
                    for s in (0, 1) for k in range(9))
        # thermal tail above k = 8 at T = 0.5 is ~ e^{-18}
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_reality(self):
        spec, coeffs = basis(0.01, 0.5)
        table = observable_table(spec, coeffs, 4, 2)
        rng = np.random.default_rng(3)
        c = rng.normal(size=(4, 4, 2, 2)) + 1j * rng.normal(size=(4, 4, 2, 2))
        # hermitize the coefficient array the way physical states are
        c = 0.5 * (c + np.conj(np.transpose(c, (1, 0, 3, 2))))
        val = np.sum(table.weights[1] * c[:, :, 0, 0])
        assert abs(val.imag) < 1e-10

    def test_supported_ceiling(self):
        spec, coeffs = basis(0.0, 0.0)
        with pytest.raises(ValueError):
            ObservableTable(spec, coeffs, 4, 9)
