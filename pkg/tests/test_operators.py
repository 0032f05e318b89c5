import numpy as np
import pytest
from numpy.testing import assert_allclose

from hltlab.errors import DomainError, GridMismatchError
from hltlab.fields import ScalarField, curl, generate_field, gradient, make_grid, sup_norm_refined
from hltlab.operators import (SIGMA, DenseHermitian, assemble_hamiltonian, dirac_operator, fractional_laplacian,
                              fractional_power, kinetic_energy, lichnerowicz_residual, magnetic_schrodinger,
                              multiplication, pauli_square, resolvent_power_quadrature, zeeman_term)
from hltlab.oracles import random_psd


@pytest.fixture(scope="module")
def grid4():
    return make_grid(4)


@pytest.fixture(scope="module")
def grid8():
    return make_grid(8)


def eig(H):
    return np.linalg.eigvalsh(H.data if isinstance(H, DenseHermitian) else H)


class TestDenseHermitian:
    def test_symmetrized(self):
        M = np.array([[1.0, 2.0], [2.0 + 1e-14, 3.0]])
        H = DenseHermitian(M)
        assert np.array_equal(H.data, H.data.conj().T)

    def test_dimension_checked(self, grid4):
        with pytest.raises(DomainError):
            DenseHermitian(np.eye(10), "scalar", grid4)

    def test_mismatched_sum(self, grid4):
        with pytest.raises(GridMismatchError):
            fractional_laplacian(grid4, 1) + pauli_square(grid4)


class TestFractionalLaplacian:
    def test_symbol_values(self, grid4):
        ev = eig(fractional_laplacian(grid4, 1))
        per_axis = np.array([0, 1, 1, 4])
        expected = np.sort((per_axis[:, None, None] + per_axis[None, :, None] + per_axis[None, None, :]).ravel())
        assert_allclose(ev, expected, atol=1e-12)

    def test_half_power_is_modulus(self, grid4):
        k = grid4.wavenumbers
        kk = np.sqrt(k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2)
        assert_allclose(eig(fractional_laplacian(grid4, 0.5)), np.sort(kk.ravel()), atol=1e-12)

    def test_mass(self, grid4):
        ev = eig(fractional_laplacian(grid4, 0.5, m=3))
        assert ev[0] >= 3 - 1e-12
        assert_allclose(ev[0], 3, atol=1e-12)


class TestDirac:
    def test_free_spectrum_symmetric(self, grid4):
        ev = eig(dirac_operator(grid4))
        assert_allclose(ev, -ev[::-1], atol=1e-12)
        k = grid4.wavenumbers
        kk = np.sqrt(k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2).ravel()
        assert_allclose(np.sort(np.abs(ev)), np.sort(np.concatenate([kk, kk])), atol=1e-12)

    def test_hermitian(self, grid4):
        D = dirac_operator(grid4, generate_field(0, "A", grid4)).data
        assert np.max(np.abs(D - D.conj().T)) <= 1e-12 * np.max(np.abs(D))

    def test_pauli_free(self, grid4):
        P = pauli_square(grid4)
        assert_allclose(P.data, np.kron(np.eye(2), fractional_laplacian(grid4, 1).data), atol=1e-12)

    def test_zeeman_squares_to_field_strength(self, grid4):
        B = curl(generate_field(1, "A", grid4))
        Z = zeeman_term(grid4, B).data
        bb = np.sum(B.data ** 2, axis=0).reshape(-1)
        assert_allclose(Z @ Z, np.kron(np.eye(2), np.diag(bb)), atol=1e-12)

    def test_pauli_matrices(self):
        for a in range(3):
            assert_allclose(SIGMA[a] @ SIGMA[a], np.eye(2))
        assert_allclose(SIGMA[0] @ SIGMA[1], 1j * SIGMA[2])


class TestLichnerowicz:
    @pytest.mark.parametrize("seed", range(3))
    def test_identity_on_half_band(self, grid8, seed):
        A = generate_field(seed, "A", grid8, amplitude=0.5, bandlimit="half")
        res = lichnerowicz_residual(grid8, A)
        assert res.compressed <= 1e-10
        # products of full-band factors alias on the lattice
        assert res.full > 1e-6

    def test_zeeman_bound_on_half_band(self, grid8):
        A = generate_field(4, "A", grid8, amplitude=0.5, bandlimit="half")
        keep = grid8.half_spectrum_mask()
        bsup = sup_norm_refined(curl(A))
        diff = (pauli_square(grid8, A) - magnetic_schrodinger(grid8, A)).compress(keep)
        scale = np.linalg.norm(magnetic_schrodinger(grid8, A).compress(keep), 2)
        assert eig(diff)[0] + bsup >= -1e-10 * scale


class TestGauge:
    def test_low_spectrum_invariant(self, grid8):
        chi = generate_field(1, "V", grid8, amplitude=0.05, bandlimit="half")
        e0 = eig(magnetic_schrodinger(grid8, None, basis="scalar"))
        e1 = eig(magnetic_schrodinger(grid8, gradient(chi), basis="scalar"))
        assert_allclose(e1[:20], e0[:20], atol=1e-8)

    def test_diamagnetic_ground_energy(self, grid8):
        tol = 1e-8 * fractional_laplacian(grid8, 1).norm()
        free = eig(fractional_laplacian(grid8, 1))[0]
        for seed in range(5):
            A = generate_field(seed, "A", grid8, bandlimit="half")
            assert eig(magnetic_schrodinger(grid8, A, basis="scalar"))[0] >= free - tol


class TestFractionalPower:
    def test_diagonal(self):
        H = DenseHermitian(np.diag([0.0, 1.0, 4.0]))
        assert_allclose(fractional_power(H, 0.5).data, np.diag([0, 1, 2]), atol=1e-15)

    def test_identity_power(self):
        H = DenseHermitian(random_psd(np.random.default_rng(0), 10))
        assert_allclose(fractional_power(H, 1).data, H.data, atol=1e-13 * H.norm())

    def test_square_root_round_trip(self):
        H = DenseHermitian(random_psd(np.random.default_rng(1), 30))
        R = fractional_power(H, 0.5).data
        assert np.linalg.norm(R @ R - H.data) <= 1e-10 * np.linalg.norm(H.data)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError):
            fractional_power(DenseHermitian(np.diag([1.0, -1.0])), 0.5)

    def test_clamps_round_off(self):
        H = DenseHermitian(np.diag([1.0, -1e-12]))
        assert_allclose(fractional_power(H, 0.5).data, np.diag([1.0, 0.0]))


class TestResolventQuadrature:
    def test_scalar(self):
        out = resolvent_power_quadrature(DenseHermitian(np.array([[4.0]])), 0.5, nodes=64)
        assert_allclose(out.data, [[2.0]], atol=1e-8)

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_identity(self, alpha):
        out = resolvent_power_quadrature(DenseHermitian(np.eye(5)), alpha)
        assert_allclose(out.data, np.eye(5), atol=1e-9)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_matches_eigendecomposition(self, alpha):
        rng = np.random.default_rng(int(alpha * 10))
        H = DenseHermitian(random_psd(rng, 50))
        exact = fractional_power(H, alpha).data
        approx = resolvent_power_quadrature(H, alpha, nodes=96).data
        assert np.linalg.norm(approx - exact, 2) <= 1e-6 * np.linalg.norm(exact, 2)

    def test_domain(self):
        with pytest.raises(DomainError):
            resolvent_power_quadrature(DenseHermitian(np.eye(2)), 1.0)
        with pytest.raises(DomainError):
            resolvent_power_quadrature(DenseHermitian(np.eye(2)), 0.5, nodes=4)


class TestHamiltonian:
    def test_free_is_laplacian(self, grid4):
        assert_allclose(assemble_hamiltonian("free", grid4, 1).data, fractional_laplacian(grid4, 1).data)

    def test_potential_shift(self, grid4):
        ind = np.zeros((4, 4, 4))
        ind[0, 1, 2] = 1
        V = ScalarField(grid4, -2.5 * ind)
        H = assemble_hamiltonian("free", grid4, 1, V=V)
        diff = H.data - fractional_laplacian(grid4, 1).data
        assert_allclose(np.diag(diff).real, -2.5 * ind.ravel(), atol=1e-15)

    def test_pauli_and_magnetic_agree_without_field(self, grid4):
        P = assemble_hamiltonian("pauli", grid4, 0.5)
        M = assemble_hamiltonian("magnetic", grid4, 0.5, basis="spinor")
        # both roots come from separate eigendecompositions
        assert_allclose(P.data, M.data, rtol=0, atol=1e-9 * P.norm())

    def test_spinor_potential_is_scalar_times_identity(self, grid4):
        V = generate_field(0, "V", grid4)
        assert_allclose(multiplication(grid4, V, "spinor").data,
                        np.kron(np.eye(2), np.diag(V.values.ravel())))

    def test_hardy_requires_offset_or_cap(self):
        g = make_grid(4, offset=False)
        with pytest.raises(DomainError):
            assemble_hamiltonian("free", g, 0.5, hardy_weight=1.0)
        assemble_hamiltonian("free", g, 0.5, hardy_weight=1.0, cap=10.0)

    def test_kind_guard(self, grid4):
        with pytest.raises(DomainError):
            kinetic_energy("relativistic", grid4, 0.5)
