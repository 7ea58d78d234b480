import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from upafeedback.linalg import (
    NumericsError,
    gram_solve,
    hermitian_sqrt,
    kronecker,
    min_singular_value,
)

from conftest import random_psd


class TestHermitianSqrt:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_sqrt(np.eye(4)), np.eye(4), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(
            hermitian_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]), atol=1e-14
        )

    def test_random_psd_reconstructs(self, rng):
        r = random_psd(rng, 8)
        s = hermitian_sqrt(r)
        rel = np.linalg.norm(s @ s.conj().T - r) / np.linalg.norm(r)
        assert rel <= 1e-9

    def test_output_hermitian_psd(self, rng):
        s = hermitian_sqrt(random_psd(rng, 8))
        assert np.linalg.norm(s - s.conj().T) <= 1e-9 * np.linalg.norm(s)
        w = np.linalg.eigvalsh(s)
        assert w.min() >= -1e-9 * w.max()

    def test_matches_eigendecomposition_oracle(self, rng):
        # independent oracle: rebuild the root from scratch eigenpairs
        r = random_psd(rng, 6)
        w, v = np.linalg.eigh(r)
        oracle = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
        np.testing.assert_allclose(hermitian_sqrt(r), oracle, atol=1e-10)

    def test_clamps_roundoff_negatives(self):
        # rank-deficient PSD whose smallest eigenvalue is a tiny negative
        v = np.array([1.0, 1.0]) / np.sqrt(2)
        r = np.outer(v, v) + np.diag([-1e-14, -1e-14])
        s = hermitian_sqrt(r)
        assert np.all(np.isfinite(s))

    def test_rejects_non_square(self):
        with pytest.raises(NumericsError):
            hermitian_sqrt(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        m = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NumericsError):
            hermitian_sqrt(m)

    def test_rejects_indefinite(self):
        with pytest.raises(NumericsError):
            hermitian_sqrt(np.diag([1.0, -0.5]))


class TestKronecker:
    def test_basis_vectors(self):
        np.testing.assert_array_equal(
            kronecker([1, 0], [1, 0, 0]), np.array([1, 0, 0, 0, 0, 0], dtype=complex)
        )

    def test_scalar_one_identity(self, rng):
        b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        np.testing.assert_array_equal(kronecker([1.0], b), b.astype(complex))

    def test_direct_expansion(self):
        out = kronecker([1, 1j], [1, -1])
        np.testing.assert_allclose(out, [1, -1, 1j, -1j], atol=0)

    # exact zeros allowed; magnitudes bounded away from the subnormal range
    # where norm-squared underflows
    _ELEMENTS = st.just(0j) | st.complex_numbers(
        min_magnitude=1e-6, max_magnitude=1e3, allow_nan=False, allow_infinity=False
    )

    @settings(deadline=None, max_examples=50)
    @given(
        a=arrays(np.complex128, st.integers(1, 6), elements=_ELEMENTS),
        b=arrays(np.complex128, st.integers(1, 6), elements=_ELEMENTS),
    )
    def test_norm_is_product_of_norms(self, a, b):
        prod = np.linalg.norm(a) * np.linalg.norm(b)
        assert np.linalg.norm(kronecker(a, b)) == pytest.approx(prod, rel=1e-12, abs=1e-300)


class TestMinSingularValue:
    def test_identity(self):
        assert min_singular_value(np.eye(3)) == pytest.approx(1.0, abs=1e-12)

    def test_duplicated_column_is_rank_deficient(self, rng):
        col = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        mat = np.stack([col, col, rng.standard_normal(5) + 0j], axis=1)
        assert min_singular_value(mat) <= 1e-10 * np.linalg.norm(mat)

    def test_matches_gram_eigenvalue_oracle(self, rng):
        a = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        oracle = np.sqrt(np.linalg.eigvalsh(a.conj().T @ a)[0])
        assert min_singular_value(a) == pytest.approx(oracle, rel=1e-8)

    def test_rejects_wide_matrix(self):
        with pytest.raises(NumericsError):
            min_singular_value(np.ones((2, 4)))

    def test_row_permutation_invariance(self, rng):
        a = rng.standard_normal((7, 4)) + 1j * rng.standard_normal((7, 4))
        perm = rng.permutation(7)
        assert min_singular_value(a[perm]) == pytest.approx(
            min_singular_value(a), abs=1e-10
        )


class TestGramSolve:
    def test_orthonormal_columns_fixed_point(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3)))
        np.testing.assert_allclose(gram_solve(q), q, atol=1e-12)

    def test_single_column(self, rng):
        h = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        out = gram_solve(h.reshape(-1, 1))
        np.testing.assert_allclose(out[:, 0], h / np.linalg.norm(h) ** 2, atol=1e-12)

    def test_residual_identity(self, rng):
        h = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        w = gram_solve(h)
        np.testing.assert_allclose(h.conj().T @ w, np.eye(3), atol=1e-8)

    def test_rejects_rank_deficient(self, rng):
        col = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        with pytest.raises(NumericsError):
            gram_solve(np.stack([col, col], axis=1))

    def test_all_outputs_finite(self, rng):
        h = rng.standard_normal((10, 4)) + 1j * rng.standard_normal((10, 4))
        assert np.all(np.isfinite(gram_solve(h)))
