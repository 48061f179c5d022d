import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdoa.errors import ConfigurationError, DegenerateInputError, ShapeError
from hyperdoa.features import (
    FeatureExtractor,
    FeatureMethod,
    FeatureVector,
    SmoothingConfig,
    apply_normalizer,
    fit_normalizer,
    lag_features,
    lag_vector,
    smoothing_features,
    spatial_smoothing,
    unvectorize_upper,
)
from hyperdoa.signal_model import (
    ArrayConfig,
    SourceScenario,
    generate_snapshots,
    sample_covariance,
    steering_vector,
)


def rank(r, rel=1e-8):
    w = np.linalg.eigvalsh(r)
    return int(np.sum(w > rel * w.max()))


def random_x(rng, n=8, t=30):
    return rng.standard_normal((n, t)) + 1j * rng.standard_normal((n, t))


def smoothing_by_definition(x, p):
    """Literal definition: average of (1/T) X_j X_j^H over the L subarrays."""
    n, t = x.shape
    blocks = [x[j : j + p] @ x[j : j + p].conj().T / t for j in range(n - p + 1)]
    return sum(blocks) / len(blocks)


class TestLagVector:
    def test_identity(self):
        np.testing.assert_array_equal(lag_vector(np.eye(4)), [1, 0, 0, 0])

    def test_two_by_two(self):
        np.testing.assert_array_equal(lag_vector(np.array([[2, 1 + 1j], [1 - 1j, 2]])), [2, 1 + 1j])

    @pytest.mark.parametrize("theta", [-70.0, -12.5, 0.0, 33.0, 81.0])
    def test_single_source_noise_free(self, theta):
        a = steering_vector(theta, 8)
        r = np.outer(a, a.conj())  # [R]_{i,i+k} = a_i conj(a_{i+k}) = exp(j pi k sin)
        expected = np.exp(1j * np.pi * np.arange(8) * np.sin(np.deg2rad(theta)))
        np.testing.assert_allclose(lag_vector(r), expected, atol=1e-12)

    def test_zeroth_lag_real(self):
        rng = np.random.default_rng(1)
        r = sample_covariance(random_x(rng))
        assert abs(lag_vector(r)[0].imag) < 1e-10


class TestLagFeatures:
    def test_layout(self):
        f = lag_features(np.eye(4), normalize_r0=False)
        np.testing.assert_array_equal(f.values, [1, 0, 0, 0, 0, 0, 0, 0])
        assert f.dim == 8

    def test_r0_normalisation(self):
        r = np.array([[2, 2j], [-2j, 2]])
        np.testing.assert_allclose(lag_features(r, normalize_r0=True).values, [1, 0, 0, 1])

    def test_degenerate(self):
        with pytest.raises(DegenerateInputError):
            lag_features(np.zeros((3, 3)), normalize_r0=True)

    def test_power_scaling(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = random_x(rng)
            c = rng.uniform(0.1, 10.0)
            r, rc = sample_covariance(x), sample_covariance(c * x)
            np.testing.assert_allclose(lag_vector(rc), c**2 * lag_vector(r), rtol=1e-12)
            np.testing.assert_allclose(
                lag_features(rc).values, lag_features(r).values, rtol=1e-12, atol=1e-14
            )


class TestSpatialSmoothing:
    def test_smallest_case_unrolled(self):
        rng = np.random.default_rng(3)
        x = random_x(rng, 3, 5)
        r1 = x[0:2] @ x[0:2].conj().T / 5
        r2 = x[1:3] @ x[1:3].conj().T / 5
        np.testing.assert_allclose(spatial_smoothing(x, SmoothingConfig(2, 3)), (r1 + r2) / 2, atol=1e-14)

    def test_matches_definition(self):
        rng = np.random.default_rng(4)
        for p in range(1, 8):
            x = random_x(rng)
            np.testing.assert_allclose(
                spatial_smoothing(x, SmoothingConfig(p, 8)), smoothing_by_definition(x, p), atol=1e-12
            )

    def test_config(self):
        with pytest.raises(ConfigurationError):
            SmoothingConfig(8, 8)
        cfg = SmoothingConfig.default(8)
        assert (cfg.subarray_size, cfg.n_subarrays) == (5, 4)
        with pytest.raises(ConfigurationError):
            cfg.check_sources(5)
        cfg.check_sources(4)

    def test_trace_is_mean_of_subarray_traces(self):
        rng = np.random.default_rng(5)
        x = random_x(rng)
        p = 5
        r = sample_covariance(x)
        mean_trace = np.mean([np.trace(r[j : j + p, j : j + p]) for j in range(8 - p + 1)])
        got = np.trace(spatial_smoothing(x, SmoothingConfig(p, 8)))
        assert abs(got - mean_trace) <= 1e-10 * abs(mean_trace)

    def test_rank_restoration_two_coherent(self):
        x = generate_snapshots(ArrayConfig(8, 100), SourceScenario([-25.0, 40.0], 0.0, True, 11, True))
        assert rank(sample_covariance(x)) == 1
        assert rank(spatial_smoothing(x, SmoothingConfig(6, 8))) == 2

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_rank_restoration_m_coherent(self, m):
        doas = np.linspace(-60, 60, m)
        x = generate_snapshots(ArrayConfig(8, 100), SourceScenario(doas, 0.0, True, 12, True))
        assert rank(sample_covariance(x)) == 1
        assert rank(spatial_smoothing(x, SmoothingConfig.default(8))) == m

    def test_single_source_stays_rank_one(self):
        x = generate_snapshots(ArrayConfig(8, 50), SourceScenario([17.0], 0.0, False, 2, True))
        assert rank(spatial_smoothing(x, SmoothingConfig(5, 8))) == 1

    def test_hermitian_psd(self):
        rng = np.random.default_rng(6)
        rss = spatial_smoothing(random_x(rng), SmoothingConfig(5, 8))
        np.testing.assert_array_equal(rss, rss.conj().T)
        assert np.linalg.eigvalsh(rss).min() >= -1e-8 * np.trace(rss).real


class TestSmoothingFeatures:
    def test_identity(self):
        np.testing.assert_array_equal(smoothing_features(np.eye(2)).values, [1, 0, 1, 0, 0, 0])

    def test_imaginary_offdiagonal(self):
        r = np.array([[1, 1j], [-1j, 1]])
        np.testing.assert_array_equal(smoothing_features(r).values, [1, 0, 1, 0, 1, 0])

    def test_dim(self):
        assert smoothing_features(np.eye(5)).dim == 30

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        for p in (1, 2, 5):
            a = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
            r = a + a.conj().T
            np.testing.assert_array_equal(unvectorize_upper(smoothing_features(r).values, p), r)


class TestNormalizer:
    def test_two_samples(self):
        n = fit_normalizer([FeatureVector(np.array([0.0, 0.0]), FeatureMethod.LAG),
                            FeatureVector(np.array([2.0, 2.0]), FeatureMethod.LAG)])
        np.testing.assert_array_equal(n.mean, [1, 1])
        np.testing.assert_array_equal(n.std, [1, 1])
        np.testing.assert_array_equal(n.transform([[0, 0], [2, 2]]), [[-1, -1], [1, 1]])

    def test_constant_dimension_clamped(self):
        n = fit_normalizer(np.array([[1.0, 3.0], [2.0, 3.0], [4.0, 3.0]]))
        assert n.std[1] == 1.0
        np.testing.assert_array_equal(n.transform([[5.0, 3.0]])[:, 1], [0.0])

    def test_needs_two_samples(self):
        with pytest.raises(ShapeError):
            fit_normalizer(np.ones((1, 3)))

    def test_dim_mismatch(self):
        n = fit_normalizer(np.random.default_rng(0).standard_normal((5, 3)))
        with pytest.raises(ShapeError):
            apply_normalizer(n, FeatureVector(np.zeros(4), FeatureMethod.LAG))

    def test_mixed_dims_rejected(self):
        with pytest.raises(ShapeError):
            fit_normalizer([FeatureVector(np.zeros(2), FeatureMethod.LAG),
                            FeatureVector(np.zeros(3), FeatureMethod.LAG)])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 40), st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_normalised_statistics(self, n_samples, dim, seed):
        rng = np.random.default_rng(seed)
        data = rng.normal(rng.normal(size=dim) * 5, rng.uniform(0.1, 3, size=dim), size=(n_samples, dim))
        z = fit_normalizer(data).transform(data)
        np.testing.assert_allclose(z.mean(axis=0), 0, atol=1e-9)
        np.testing.assert_allclose(z.std(axis=0), 1, atol=1e-9)

    def test_dict_round_trip(self):
        n = fit_normalizer(np.random.default_rng(1).standard_normal((10, 4)))
        m = type(n).from_dict(n.to_dict())
        np.testing.assert_array_equal(m.mean, n.mean)
        np.testing.assert_array_equal(m.std, n.std)


class TestExtractor:
    def test_dims(self):
        assert FeatureExtractor(FeatureMethod.LAG, 8).dim == 16
        assert FeatureExtractor(FeatureMethod.SPATIAL_SMOOTHING, 8, 5).dim == 30

    def test_pure(self):
        rng = np.random.default_rng(8)
        x = random_x(rng)
        for ex in (FeatureExtractor("lag", 8), FeatureExtractor("spatial_smoothing", 8, 5)):
            assert ex(x).values.tobytes() == ex(x.copy()).values.tobytes()
            assert ex(x).dim == ex.dim
