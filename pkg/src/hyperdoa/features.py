"""
Covariance features for the HDC encoder.

Two extractors turn a snapshot matrix into a real feature vector:

* ``lag`` -- mean of every superdiagonal of the sample covariance (one value
  per spatial lag), optionally divided by ``|r_0|``, real parts then
  imaginary parts.  Length ``2N``.
* ``spatial_smoothing`` -- forward spatially smoothed covariance, upper
  triangle (diagonal included, row-major), real parts then imaginary parts.
  Length ``M_sub (M_sub + 1)``.

Both are followed by a z-score :class:`Normalizer` fitted on training data.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, ShapeError
from .signal_model import sample_covariance
from . import trace

STD_CLAMP = 1e-12
R0_FLOOR = 1e-12


class FeatureMethod(str, Enum):
    LAG = "lag"
    SPATIAL_SMOOTHING = "spatial_smoothing"


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    method: FeatureMethod

    @property
    def dim(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class SmoothingConfig:
    subarray_size: int
    n_antennas: int

    def __post_init__(self):
        if self.subarray_size < 1:
            raise ConfigurationError("subarray_size must be >= 1")
        if self.subarray_size >= self.n_antennas:
            raise ConfigurationError(
                f"subarray_size {self.subarray_size} must be < n_antennas {self.n_antennas}"
            )

    @property
    def n_subarrays(self):
        return self.n_antennas - self.subarray_size + 1

    @classmethod
    def default(cls, n_antennas):
        # L = 4 for N = 8: enough to decorrelate up to four coherent sources.
        return cls(max(1, n_antennas - 3), n_antennas)

    def check_sources(self, m):
        if self.subarray_size < m + 1:
            raise ConfigurationError(
                f"subarray_size {self.subarray_size} cannot resolve {m} sources (need >= {m + 1})"
            )


def lag_vector(r):
    """Mean of each superdiagonal: ``r_k = mean_i R[i, i+k]``, k = 0..N-1."""
    r = np.asarray(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ShapeError(f"covariance must be square, got {r.shape}")
    n = r.shape[0]
    return np.array([np.diagonal(r, offset=k).mean() for k in range(n)])


def lag_features(r, normalize_r0=True):
    lags = lag_vector(r)
    if normalize_r0:
        r0 = abs(lags[0])
        if r0 <= R0_FLOOR:
            raise DegenerateInputError(f"|r_0| = {r0:g} is too small to normalise by")
        lags = lags / r0
    return FeatureVector(np.concatenate([lags.real, lags.imag]), FeatureMethod.LAG)


def spatial_smoothing(x, cfg: SmoothingConfig):
    """Average of the ``L`` overlapping subarray covariances (forward smoothing).

    Subarray ``j`` uses rows ``j .. j + M_sub - 1`` of ``x``; its covariance is
    the matching diagonal block of the full sample covariance, which is what
    gets averaged here.
    """
    x = np.asarray(x)
    if x.ndim != 2:
        raise ShapeError(f"snapshot matrix must be 2-D, got {x.shape}")
    if x.shape[0] != cfg.n_antennas:
        raise ShapeError(f"snapshot matrix has {x.shape[0]} rows, config expects {cfg.n_antennas}")
    r = sample_covariance(x)
    p = cfg.subarray_size
    rss = np.zeros((p, p), dtype=r.dtype)
    for j in range(cfg.n_subarrays):
        rss += r[j : j + p, j : j + p]
    return rss / cfg.n_subarrays


def smoothing_features(rss):
    rss = np.asarray(rss)
    if rss.ndim != 2 or rss.shape[0] != rss.shape[1]:
        raise ShapeError(f"smoothed covariance must be square, got {rss.shape}")
    upper = rss[np.triu_indices(rss.shape[0])]
    return FeatureVector(np.concatenate([upper.real, upper.imag]), FeatureMethod.SPATIAL_SMOOTHING)


def unvectorize_upper(values, size):
    """Inverse of :func:`smoothing_features`: rebuild the Hermitian matrix."""
    k = size * (size + 1) // 2
    values = np.asarray(values)
    if values.shape != (2 * k,):
        raise ShapeError(f"expected {2 * k} feature values for size {size}, got {values.shape}")
    r = np.zeros((size, size), dtype=np.complex128)
    iu = np.triu_indices(size)
    r[iu] = values[:k] + 1j * values[k:]
    lower = np.tril_indices(size, -1)
    r[lower] = r.T[lower].conj()
    return r


@dataclass(frozen=True)
class FeatureExtractor:
    """Snapshot matrix -> raw (un-normalised) feature vector."""

    method: FeatureMethod
    n_antennas: int
    subarray_size: int = 0
    normalize_r0: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", FeatureMethod(self.method))
        if self.method is FeatureMethod.SPATIAL_SMOOTHING:
            SmoothingConfig(self.subarray_size, self.n_antennas)

    @property
    def dim(self):
        if self.method is FeatureMethod.LAG:
            return 2 * self.n_antennas
        return self.subarray_size * (self.subarray_size + 1)

    def __call__(self, x):
        trace.record("features")
        if self.method is FeatureMethod.LAG:
            return lag_features(sample_covariance(x), self.normalize_r0)
        cfg = SmoothingConfig(self.subarray_size, self.n_antennas)
        return smoothing_features(spatial_smoothing(x, cfg))

    def batch(self, xs):
        return np.stack([self(x).values for x in xs])

    def to_dict(self):
        return {
            "method": self.method.value,
            "n_antennas": self.n_antennas,
            "subarray_size": self.subarray_size,
            "normalize_r0": self.normalize_r0,
            "upper_triangle_order": "row-major, diagonal included",
        }

    @classmethod
    def from_dict(cls, d):
        return cls(FeatureMethod(d["method"]), d["n_antennas"], d["subarray_size"], d["normalize_r0"])


@dataclass(frozen=True)
class Normalizer:
    """Per-dimension z-score statistics (population std, tiny std clamped to 1)."""

    mean: np.ndarray
    std: np.ndarray
    fitted_on: int

    def __call__(self, f):
        return apply_normalizer(self, f)

    def transform(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape[-1] != self.mean.shape[0]:
            raise ShapeError(
                f"feature dim {values.shape[-1]} does not match normaliser dim {self.mean.shape[0]}"
            )
        return (values - self.mean) / self.std

    def to_dict(self):
        return {"mean": self.mean.tolist(), "std": self.std.tolist(), "fitted_on": self.fitted_on}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["mean"], dtype=np.float64), np.array(d["std"], dtype=np.float64), int(d["fitted_on"]))


def fit_normalizer(features):
    """Fit z-score statistics on a list of :class:`FeatureVector` (or a 2-D array)."""
    if isinstance(features, np.ndarray):
        values = features
    else:
        features = list(features)
        if features and isinstance(features[0], FeatureVector):
            methods = {f.method for f in features}
            if len(methods) > 1:
                raise ShapeError("cannot fit a normaliser on mixed feature methods")
            dims = {f.dim for f in features}
            if len(dims) > 1:
                raise ShapeError(f"feature dims differ: {sorted(dims)}")
            values = np.stack([f.values for f in features])
        else:
            values = np.asarray(features, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] < 2:
        raise ShapeError("need at least two samples to fit a normaliser")
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    std = np.where(std < STD_CLAMP, 1.0, std)
    return Normalizer(mean, std, values.shape[0])


def apply_normalizer(n: Normalizer, f: FeatureVector):
    return FeatureVector(n.transform(f.values), f.method)
