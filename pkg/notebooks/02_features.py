"""
Covariance features
===================

The two real-valued feature maps fed to the encoder: averaged spatial lags
of the covariance, and the upper triangle of a spatially smoothed covariance.
"""

import numpy as np

from hyperdoa import (
    ArrayConfig,
    FeatureExtractor,
    FeatureMethod,
    SmoothingConfig,
    SourceScenario,
    fit_normalizer,
    generate_snapshots,
    lag_features,
    sample_covariance,
    spatial_smoothing,
)

x = generate_snapshots(ArrayConfig(8, 100), SourceScenario([-20.0, 35.0], 5.0, True, 4))

# lag k averages the k-th superdiagonal; dividing by |r_0| removes the
# overall power so features are comparable across SNR
f = lag_features(sample_covariance(x))
print("lag features:", f.dim, "values")
print(np.round(f.values[:4], 3))

# forward smoothing averages the L = N - M_sub + 1 overlapping subarray
# covariances; with M_sub = N - 3 there are four of them
cfg = SmoothingConfig.default(8)
rss = spatial_smoothing(x, cfg)
w = np.linalg.eigvalsh(rss)[::-1]
print(f"R_SS is {rss.shape}, {cfg.n_subarrays} subarrays, eigenvalues {np.round(w, 2)}")

# the extractor bundles either map; the normaliser is fitted on a training set
ex = FeatureExtractor(FeatureMethod.SPATIAL_SMOOTHING, 8, cfg.subarray_size)
train = [generate_snapshots(ArrayConfig(8, 100), SourceScenario([a, a + 40.0], 3.0, True, s))
         for s, a in enumerate(np.linspace(-80, 40, 30))]
norm = fit_normalizer(ex.batch(train))
z = norm.transform(ex.batch(train))
print("z-scored feature means ~0:", np.allclose(z.mean(axis=0), 0.0, atol=1e-12))
