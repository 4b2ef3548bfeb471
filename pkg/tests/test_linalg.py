import numpy as np
import pytest

from purex import linalg
from purex.errors import DimensionError, NumericError


class TestExpm:
    def test_zero_matrix(self):
        np.testing.assert_allclose(linalg.expm(np.zeros((3, 3))), np.eye(3), atol=1e-15)

    def test_diagonal(self):
        out = linalg.expm(np.diag([-1.0, -2.0j]), 1.0)
        np.testing.assert_allclose(out, np.diag([np.exp(-1.0), np.exp(-2.0j)]), atol=1e-14)

    def test_against_eigendecomposition_oracle(self, rng):
        # Independent oracle: exp(0.7 * R) = V diag(exp(0.7 w)) V^-1.
        r = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w, v = np.linalg.eig(r)
        oracle = v @ np.diag(np.exp(0.7 * w)) @ np.linalg.inv(v)
        gap = linalg.frobenius_norm(linalg.expm(r, 0.7) - oracle)
        assert gap < 1e-10 * linalg.frobenius_norm(oracle)

    def test_semigroup_property(self, rng):
        for _ in range(25):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            a *= rng.uniform(0.2, 10.0) / np.linalg.norm(a)
            s, t = rng.uniform(0.0, 5.0, size=2)
            combined = linalg.expm(a, s + t)
            gap = linalg.frobenius_norm(linalg.expm(a, s) @ linalg.expm(a, t) - combined)
            assert gap < 1e-10 * linalg.frobenius_norm(combined)

    def test_scale_argument(self):
        a = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
        np.testing.assert_allclose(linalg.expm(a, 0.0), np.eye(2), atol=1e-15)
        np.testing.assert_allclose(
            linalg.expm(a, np.pi / 2.0),
            np.array([[0.0, 1.0], [-1.0, 0.0]]),
            atol=1e-13,
        )

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            linalg.expm(np.zeros((2, 3)))

    def test_rejects_non_finite(self):
        bad = np.array([[np.nan, 0.0], [0.0, 1.0]])
        with pytest.raises(NumericError):
            linalg.expm(bad)


class TestEig:
    def test_diagonal_input(self):
        es = linalg.eig(np.diag([1.0, 0.5, 0.5]))
        np.testing.assert_allclose(es.eigenvalues, [1.0, 0.5, 0.5], atol=1e-15)
        assert es.diagonalizable

    def test_identity_biorthonormal(self):
        es = linalg.eig(np.eye(2))
        np.testing.assert_allclose(es.eigenvalues, [1.0, 1.0])
        np.testing.assert_allclose(es.left_vectors @ es.right_vectors, np.eye(2), atol=1e-9)

    def test_jordan_block_flagged(self):
        es = linalg.eig(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert not es.diagonalizable
        assert es.condition_estimate < 1e-10

    def test_ordering_descending_modulus_then_real_then_imag(self):
        m = np.diag([0.5, -1.0, 1.0, 0.3j])
        es = linalg.eig(m)
        np.testing.assert_allclose(es.eigenvalues, [1.0, -1.0, 0.5, 0.3j], atol=1e-15)

    def test_ordering_deterministic(self, rng):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        first = linalg.eig(a)
        second = linalg.eig(a)
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
        np.testing.assert_array_equal(first.right_vectors, second.right_vectors)

    def test_right_eigenvector_residuals(self, rng):
        for _ in range(20):
            a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            es = linalg.eig(a)
            scale = linalg.frobenius_norm(a)
            for n in range(5):
                residual = a @ es.right_vectors[:, n] - es.eigenvalues[n] * es.right_vectors[:, n]
                assert np.linalg.norm(residual) < 1e-9 * scale

    def test_biorthonormality_and_reconstruction(self, rng):
        for _ in range(20):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            es = linalg.eig(a)
            assert es.diagonalizable
            np.testing.assert_allclose(
                es.left_vectors @ es.right_vectors, np.eye(4), atol=1e-9
            )
            recon = sum(es.eigenvalues[n] * es.eigenprojection(n) for n in range(4))
            assert linalg.frobenius_norm(recon - a) < 1e-8 * linalg.frobenius_norm(a)


class TestVectorization:
    def test_round_trip(self, rng):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        np.testing.assert_array_equal(linalg.devectorize(linalg.vectorize(m), 2, 2), m)

    def test_up_population_slot(self):
        up_up = np.diag([1.0, 0.0])
        np.testing.assert_array_equal(linalg.vectorize(up_up), [1, 0, 0, 0])
        np.testing.assert_array_equal(linalg.vec_population_first(up_up), [1, 0, 0, 0])

    def test_devectorize_length_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.devectorize(np.arange(5), 2, 2)

    def test_sandwich_superoperator_on_basis(self, rng):
        # Oracle: direct evaluation of A @ E @ B on all four matrix units.
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        superop = linalg.sandwich_superoperator(a, b)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                via_superop = linalg.devectorize(superop @ linalg.vectorize(unit), 2, 2)
                np.testing.assert_allclose(via_superop, a @ unit @ b, atol=1e-14)

    def test_population_first_permutation(self):
        assert linalg.population_first_indices(2) == (0, 3, 1, 2)
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(linalg.vec_population_first(m), [1, 4, 2, 3])
        np.testing.assert_array_equal(
            linalg.unvec_population_first(linalg.vec_population_first(m)), m
        )

    def test_population_first_superoperator(self, rng):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        reordered = linalg.superoperator_population_first(linalg.sandwich_superoperator(a, b))
        via_map = reordered @ linalg.vec_population_first(rho)
        np.testing.assert_allclose(via_map, linalg.vec_population_first(a @ rho @ b), atol=1e-14)

    def test_population_first_basis(self):
        basis = linalg.population_first_basis(2)
        np.testing.assert_array_equal(basis[0], np.diag([1.0, 0.0]))
        np.testing.assert_array_equal(basis[1], np.diag([0.0, 1.0]))
        np.testing.assert_array_equal(basis[2], [[0.0, 1.0], [0.0, 0.0]])
        np.testing.assert_array_equal(basis[3], [[0.0, 0.0], [1.0, 0.0]])


class TestSmallOps:
    def test_frobenius_norm_identity(self):
        assert linalg.frobenius_norm(np.eye(4)) == 2.0

    def test_trace(self):
        assert linalg.trace(np.diag([0.3, 0.7])) == pytest.approx(1.0)
        with pytest.raises(DimensionError):
            linalg.trace(np.zeros((2, 3)))

    def test_dagger(self):
        m = np.array([[1.0, 2.0j], [3.0, 4.0]])
        np.testing.assert_array_equal(linalg.dagger(m), m.conj().T)

    def test_kron_block_structure(self):
        sigma = np.array([[0.0, 1.0], [1.0, 0.0]])
        out = linalg.kron(np.eye(2), sigma)
        np.testing.assert_array_equal(out[:2, :2], sigma)
        np.testing.assert_array_equal(out[2:, 2:], sigma)
        np.testing.assert_array_equal(out[:2, 2:], np.zeros((2, 2)))
