import math

import numpy as np
import pytest
from scipy import integrate
from scipy import stats as spstats

from momentlab import ensemble, orthopoly, spectral
from momentlab.ensemble import CanonicalSample, EnsembleSpec
from momentlab.exceptions import DimensionMismatchError, DomainError

SEED = 0x5EEDCA70


class TestEnsembleSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n": 0, "seed": 1},
            {"n": 2, "seed": -1},
            {"n": 2, "seed": 2**64},
            {"n": 2, "seed": 1, "replicate": -1},
        ],
    )
    def test_invalid_spec_raises(self, kwargs):
        with pytest.raises(DomainError):
            EnsembleSpec(**kwargs)

    def test_samples_are_deterministic(self):
        first = ensemble.sample_canonical(EnsembleSpec(30, SEED, 4))
        second = ensemble.sample_canonical(EnsembleSpec(30, SEED, 4))
        np.testing.assert_array_equal(first.p, second.p)

    def test_replicates_are_independent_streams(self):
        first = ensemble.sample_canonical(EnsembleSpec(30, SEED, 0))
        second = ensemble.sample_canonical(EnsembleSpec(30, SEED, 1))
        assert not np.array_equal(first.p, second.p)


class TestSampling:
    def test_beta_shapes(self):
        np.testing.assert_array_equal(ensemble.beta_shapes(3), [5.0, 4.0, 3.0, 2.0, 1.0])
        np.testing.assert_array_equal(ensemble.beta_shapes(3, 2), [5.0, 4.0])

    def test_beta_symmetric_variance(self):
        assert ensemble.beta_symmetric_variance(1.0) == pytest.approx(1 / 12)

    def test_shape_one_is_uniform(self, rng):
        draws = ensemble.sample_beta_symmetric(1.0, rng, size=100_000)
        assert spstats.kstest(draws, "uniform").pvalue > 1e-3

    @pytest.mark.parametrize("a", [2.0, 7.0, 40.0])
    def test_beta_law(self, rng, a):
        draws = ensemble.sample_beta_symmetric(a, rng, size=50_000)
        assert spstats.kstest(draws, spstats.beta(a, a).cdf).pvalue > 1e-3

    def test_non_positive_shape_raises(self, rng):
        with pytest.raises(DomainError, match="positive"):
            ensemble.sample_beta_symmetric(0.0, rng)

    def test_order_one_is_uniform_on_average(self):
        values = [
            ensemble.sample_canonical(EnsembleSpec(1, SEED, r)).p[0] for r in range(4000)
        ]
        stderr = math.sqrt(1 / 12 / len(values))
        assert abs(np.mean(values) - 0.5) <= 4 * stderr

    def test_order_two_first_coordinate_variance(self):
        values = np.array(
            [ensemble.sample_canonical(EnsembleSpec(2, SEED, r), length=1).p[0] for r in range(20_000)]
        )
        squares = (values - values.mean()) ** 2
        stderr = squares.std(ddof=1) / math.sqrt(values.size)
        assert ensemble.beta_symmetric_variance(3.0) == pytest.approx(1 / 28)
        assert abs(values.var(ddof=1) - 1 / 28) <= 3 * stderr

    def test_sample_length(self):
        spec = EnsembleSpec(5, SEED)
        assert ensemble.sample_canonical(spec).p.size == 9
        assert ensemble.sample_canonical(spec, length=3).p.size == 3
        with pytest.raises(DomainError):
            ensemble.sample_canonical(spec, length=10)

    def test_samples_are_interior(self):
        sample = ensemble.sample_canonical(EnsembleSpec(200, SEED))
        assert np.all((sample.p > 0.0) & (sample.p < 1.0))

    def test_alpha(self):
        sample = CanonicalSample(2, np.array([0.25, 0.5, 0.75]))
        np.testing.assert_allclose(sample.alpha, [-0.5, 0.0, 0.5])


class TestJacobiModels:
    def test_arcsine_sample_gives_chebyshev_matrix(self):
        sample = CanonicalSample(4, np.full(7, 0.5))
        assert ensemble.build_jacobi(sample, 4).max_abs_difference(orthopoly.chebyshev_matrix(4)) < 1e-15

    def test_order_one_matrix(self):
        sample = CanonicalSample(1, np.array([0.3]))
        np.testing.assert_array_equal(ensemble.build_jacobi(sample, 1).diag, [0.3])

    def test_dimension_out_of_range(self):
        sample = CanonicalSample(2, np.full(3, 0.5))
        with pytest.raises(DomainError):
            ensemble.build_jacobi(sample, 3)

    def test_killip_nenciu_arcsine_sample(self):
        model = ensemble.build_killip_nenciu(CanonicalSample(4, np.full(7, 0.5)))
        np.testing.assert_allclose(model.diag, 0.0, atol=1e-15)
        np.testing.assert_allclose(model.offdiag, [math.sqrt(2.0), 1.0, 1.0])

    def test_killip_nenciu_order_one(self):
        model = ensemble.build_killip_nenciu(CanonicalSample(1, np.array([0.8])))
        np.testing.assert_allclose(model.diag, [4 * 0.8 - 2])

    def test_killip_nenciu_needs_full_sample(self):
        with pytest.raises(DimensionMismatchError):
            ensemble.build_killip_nenciu(CanonicalSample(3, np.full(4, 0.5)))

    @pytest.mark.parametrize("n", [1, 2, 3, 10, 50])
    def test_killip_nenciu_is_affine_in_jacobi(self, n):
        for replicate in range(20):
            sample = ensemble.sample_canonical(EnsembleSpec(n, SEED, replicate))
            model = ensemble.build_killip_nenciu(sample)
            affine = ensemble.build_jacobi(sample, n).scaled(4.0, -2.0)
            assert model.max_abs_difference(affine) < 1e-12

    def test_spectrum_support(self):
        for replicate in range(10):
            sample = ensemble.sample_canonical(EnsembleSpec(25, SEED, replicate))
            roots = spectral.eigenvalues(ensemble.build_jacobi(sample, 25)).eigenvalues
            assert np.all((roots > 0.0) & (roots < 1.0))
            shifted = spectral.eigenvalues(ensemble.build_killip_nenciu(sample)).eigenvalues
            assert np.all((shifted > -2.0) & (shifted < 2.0))


class TestDensities:
    def test_joint_root_constants(self):
        assert ensemble.joint_root_log_constant(1) == pytest.approx(0.0, abs=1e-14)
        assert math.exp(ensemble.joint_root_log_constant(2)) == pytest.approx(15.0, rel=1e-12)

    def test_joint_root_log_density(self):
        value = ensemble.joint_root_log_density([0.8, 0.3], 2)
        assert value == pytest.approx(math.log(15.0) + 4 * math.log(0.5))
        assert ensemble.joint_root_log_density([0.4], 1) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("x", [[0.3, 0.3], [1.2, 0.3], [-0.1, 0.5]])
    def test_joint_root_log_density_zero_density(self, x):
        assert ensemble.joint_root_log_density(x, 2) == -np.inf

    def test_joint_root_log_density_length(self):
        with pytest.raises(DimensionMismatchError):
            ensemble.joint_root_log_density([0.1, 0.2, 0.3], 2)

    def test_joint_root_density_integrates_to_one(self):
        value, _ = integrate.dblquad(
            lambda y, x: math.exp(ensemble.joint_root_log_density([x, y], 2)),
            0.0,
            1.0,
            0.0,
            1.0,
        )
        assert value == pytest.approx(1.0, rel=1e-6)

    def test_canonical_log_density(self):
        assert ensemble.canonical_log_density([0.37], 1) == pytest.approx(0.0, abs=1e-12)
        assert ensemble.canonical_log_density([0.5, 0.5, 0.5], 2) == pytest.approx(
            math.log(15 / 8) + math.log(3 / 2)
        )

    def test_canonical_density_integrates_to_one(self, rng):
        points = rng.uniform(size=(20_000, 3))
        values = np.exp([ensemble.canonical_log_density(p, 2) for p in points])
        stderr = values.std(ddof=1) / math.sqrt(values.size)
        assert abs(values.mean() - 1.0) <= 3 * stderr

    def test_canonical_log_density_length(self):
        with pytest.raises(DimensionMismatchError):
            ensemble.canonical_log_density([0.5, 0.5], 2)
