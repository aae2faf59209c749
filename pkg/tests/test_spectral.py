import numpy as np
import pytest

from momentlab import canonical, orthopoly, spectral
from momentlab.exceptions import (
    ConvergenceError,
    DegenerateMatrixError,
    DimensionMismatchError,
    DomainError,
    InsufficientLengthError,
)
from momentlab.spectral import SymmetricTridiagonal

from .utils import arcsine_zeta, random_zeta

METHODS = ("ql", "bisect")


def random_matrix(rng, size):
    return SymmetricTridiagonal(rng.uniform(0.0, 1.0, size), rng.uniform(0.01, 0.5, size - 1))


class TestSymmetricTridiagonal:
    def test_from_zeta_arcsine_is_chebyshev_matrix(self):
        matrix = SymmetricTridiagonal.from_zeta(arcsine_zeta(5), 3)
        assert matrix.max_abs_difference(orthopoly.chebyshev_matrix(3)) < 1e-15

    def test_from_zeta_entries(self):
        matrix = SymmetricTridiagonal.from_zeta([0.2, 0.3, 0.4], 2)
        np.testing.assert_allclose(matrix.diag, [0.2, 0.7])
        np.testing.assert_allclose(matrix.offdiag, [np.sqrt(0.06)])

    def test_from_zeta_too_short(self):
        with pytest.raises(InsufficientLengthError):
            SymmetricTridiagonal.from_zeta([0.5, 0.25], 2)

    def test_offdiag_length_must_match(self):
        with pytest.raises(DimensionMismatchError, match="off-diagonal"):
            SymmetricTridiagonal([0.5, 0.5], [0.1, 0.2])

    def test_dense_trace_and_frobenius(self, rng):
        matrix = random_matrix(rng, 6)
        dense = matrix.to_dense()
        np.testing.assert_array_equal(dense, dense.T)
        assert matrix.trace() == pytest.approx(np.trace(dense))
        assert matrix.frobenius_squared() == pytest.approx(np.sum(dense**2))

    def test_leading_and_scaled(self, rng):
        matrix = random_matrix(rng, 5)
        block = matrix.leading(3)
        np.testing.assert_array_equal(block.to_dense(), matrix.to_dense()[:3, :3])
        np.testing.assert_allclose(
            matrix.scaled(4.0, -2.0).to_dense(), 4.0 * matrix.to_dense() - 2.0 * np.eye(5)
        )
        with pytest.raises(DomainError):
            matrix.leading(6)

    def test_max_abs_difference_needs_equal_sizes(self, rng):
        with pytest.raises(DimensionMismatchError):
            random_matrix(rng, 3).max_abs_difference(random_matrix(rng, 4))


class TestEigenvalues:
    @pytest.mark.parametrize("method", METHODS)
    def test_chebyshev_matrix(self, method):
        values = spectral.eigenvalues(orthopoly.chebyshev_matrix(3), method=method)
        np.testing.assert_allclose(
            values.eigenvalues, [0.06698729811, 0.5, 0.93301270189], atol=1e-11
        )

    @pytest.mark.parametrize("method", METHODS)
    @pytest.mark.parametrize("m", [2, 8, 64, 512])
    def test_chebyshev_roots_accuracy(self, m, method):
        values = spectral.eigenvalues(orthopoly.chebyshev_matrix(m), method=method)
        np.testing.assert_allclose(
            values.eigenvalues, np.sort(orthopoly.chebyshev_roots(m)), rtol=0, atol=1e-11
        )

    @pytest.mark.parametrize("method", METHODS)
    def test_one_by_one(self, method):
        values = spectral.eigenvalues(SymmetricTridiagonal([0.3], []), method=method)
        np.testing.assert_array_equal(values.eigenvalues, [0.3])
        assert len(values) == 1

    def test_unknown_method(self):
        with pytest.raises(DomainError, match="Unknown eigenvalue method"):
            spectral.eigenvalues(orthopoly.chebyshev_matrix(2), method="jacobi")

    def test_similarity_invariants(self, rng):
        matrix = random_matrix(rng, 40)
        values = spectral.eigenvalues(matrix).eigenvalues
        assert values.sum() == pytest.approx(matrix.trace(), rel=1e-10)
        assert np.sum(values**2) == pytest.approx(matrix.frobenius_squared(), rel=1e-10)

    def test_methods_agree(self, rng):
        for _ in range(20):
            matrix = random_matrix(rng, int(rng.integers(2, 201)))
            np.testing.assert_allclose(
                spectral.eigenvalues(matrix, method="ql").eigenvalues,
                spectral.eigenvalues(matrix, method="bisect").eigenvalues,
                rtol=0,
                atol=1e-10,
            )

    def test_spectrum_descending(self):
        spectrum = spectral.eigenvalues(orthopoly.chebyshev_matrix(3))
        np.testing.assert_allclose(spectrum.descending(), orthopoly.chebyshev_roots(3), atol=1e-12)

    def test_interlacing(self, rng):
        matrix = SymmetricTridiagonal.from_zeta(random_zeta(rng, 19), 10)
        outer = spectral.eigenvalues(matrix)
        inner = spectral.eigenvalues(matrix.leading(9))
        assert spectral.interlaces(outer, inner)
        assert not spectral.interlaces(outer, spectral.Spectrum(inner.eigenvalues + 1.0))

    def test_interlacing_needs_one_fewer_value(self):
        spectrum = spectral.eigenvalues(orthopoly.chebyshev_matrix(3))
        with pytest.raises(DimensionMismatchError):
            spectral.interlaces(spectrum, spectrum)


class TestPrincipalRepresentation:
    def test_one_by_one(self):
        rep = spectral.principal_representation(SymmetricTridiagonal([0.4], []))
        np.testing.assert_array_equal(rep.support, [0.4])
        np.testing.assert_array_equal(rep.weights, [1.0])

    @pytest.mark.parametrize("m", [2, 5, 12])
    def test_chebyshev_weights_are_equal(self, m):
        rep = spectral.principal_representation(orthopoly.chebyshev_matrix(m))
        np.testing.assert_allclose(rep.weights, np.full(m, 1.0 / m), atol=1e-12)
        np.testing.assert_allclose(rep.support, np.sort(orthopoly.chebyshev_roots(m)), atol=1e-12)

    def test_support_matches_lapack(self, rng):
        matrix = random_matrix(rng, 30)
        rep = spectral.principal_representation(matrix)
        np.testing.assert_allclose(rep.support, spectral.eigenvalues(matrix).eigenvalues, atol=1e-12)
        assert rep.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.diff(rep.support) > 0)

    def test_moments_match_zeta_moments(self, rng):
        z = random_zeta(rng, 5)
        rep = spectral.principal_representation(SymmetricTridiagonal.from_zeta(z, 3))
        np.testing.assert_allclose(rep.moments(5), canonical.zeta_to_moments(z, 5), atol=1e-9)

    def test_zero_offdiag_is_degenerate(self):
        with pytest.raises(DegenerateMatrixError, match="not positive"):
            spectral.principal_representation(SymmetricTridiagonal([0.5, 0.5], [0.0]))

    def test_sweep_budget(self, monkeypatch):
        monkeypatch.setattr(spectral, "MAX_SWEEPS", 0)
        with pytest.raises(ConvergenceError, match="sweeps"):
            spectral.principal_representation(orthopoly.chebyshev_matrix(4))


class TestSpectralMoments:
    def test_arcsine(self):
        np.testing.assert_allclose(
            spectral.spectral_moments(orthopoly.chebyshev_matrix(3), 3),
            [0.5, 0.375, 0.3125],
            atol=1e-14,
        )

    def test_point_mass(self):
        np.testing.assert_allclose(
            spectral.spectral_moments(SymmetricTridiagonal([0.3], []), 2), [0.3, 0.09]
        )

    def test_truncations_agree_up_to_order_2n_minus_1(self, rng):
        z = random_zeta(rng, 9)
        for n in range(1, 5):
            small = spectral.spectral_moments(SymmetricTridiagonal.from_zeta(z, n), 2 * n - 1)
            large = spectral.spectral_moments(SymmetricTridiagonal.from_zeta(z, n + 1), 2 * n - 1)
            np.testing.assert_allclose(small, large, rtol=0, atol=1e-9)

    def test_count_must_be_positive(self):
        with pytest.raises(DomainError):
            spectral.spectral_moments(orthopoly.chebyshev_matrix(2), 0)
