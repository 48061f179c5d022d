"""
Narrowband ULA signal model
===========================

Half-wavelength uniform linear array, ``X = A(theta) S + V`` with circular
complex Gaussian sources and noise.  Noise power is fixed at 1 so the
per-source SNR in dB sets the source power directly.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, ShapeError

RNG_NAME = "numpy.PCG64"
MAX_DOA_ATTEMPTS = 1000


@dataclass(frozen=True)
class ArrayConfig:
    n_antennas: int = 8
    n_snapshots: int = 100

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 2:
            raise ConfigurationError(f"n_antennas must be an integer >= 2, got {self.n_antennas}")
        if int(self.n_snapshots) != self.n_snapshots or self.n_snapshots < 1:
            raise ConfigurationError(f"n_snapshots must be an integer >= 1, got {self.n_snapshots}")


@dataclass(frozen=True)
class SourceScenario:
    """Source directions and signal statistics for one snapshot matrix.

    Parameters
    ----------
    doas_deg : sequence of float
        Source directions in degrees, each within [-90, 90].
    snr_db : float
        Per-source SNR in dB (noise power is 1).
    coherent : bool
        If True all sources share one waveform up to unit-modulus phase gains.
    rng_seed : int
        Unsigned 64-bit seed; equal scenarios reproduce identical data.
    noise_free : bool
        Debug switch standing in for the infinite-SNR limit (noise power 0).
    min_separation_deg : float
        Minimum pairwise separation enforced on ``doas_deg``.
    """

    doas_deg: Sequence[float]
    snr_db: float = 0.0
    coherent: bool = False
    rng_seed: int = 0
    noise_free: bool = False
    min_separation_deg: float = 15.0
    _doas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        doas = np.atleast_1d(np.asarray(self.doas_deg, dtype=np.float64))
        if doas.ndim != 1 or doas.size < 1:
            raise ConfigurationError("a scenario needs at least one source")
        if not np.all(np.isfinite(doas)) or np.any(np.abs(doas) > 90.0):
            raise DomainError(f"source DoAs must lie in [-90, 90] degrees, got {doas.tolist()}")
        if not np.isfinite(self.snr_db):
            raise ConfigurationError("snr_db must be finite")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise ConfigurationError("rng_seed must be an unsigned 64-bit integer")
        if doas.size > 1:
            gaps = np.abs(doas[:, None] - doas[None, :])[np.triu_indices(doas.size, 1)]
            if gaps.min() < self.min_separation_deg:
                raise ConfigurationError(
                    f"sources closer than {self.min_separation_deg} deg: {doas.tolist()}"
                )
        object.__setattr__(self, "_doas", doas)

    @property
    def n_sources(self):
        return self._doas.size

    @property
    def doas(self):
        return self._doas.copy()


def steering_vector(theta_deg, n_antennas):
    """ULA response ``a(theta)[k] = exp(-j pi k sin(theta))``, k = 0..N-1."""
    if n_antennas < 1:
        raise ConfigurationError("n_antennas must be >= 1")
    if not np.isfinite(theta_deg) or abs(theta_deg) > 90.0:
        raise DomainError(f"angle {theta_deg} outside [-90, 90] degrees")
    k = np.arange(n_antennas)
    return np.exp(-1j * np.pi * k * np.sin(np.deg2rad(theta_deg)))


def steering_matrix(thetas_deg, n_antennas):
    """Stack steering vectors column-wise, shape ``(n_antennas, len(thetas_deg))``."""
    thetas = np.atleast_1d(np.asarray(thetas_deg, dtype=np.float64))
    if np.any(~np.isfinite(thetas)) or np.any(np.abs(thetas) > 90.0):
        raise DomainError("steering angles must lie in [-90, 90] degrees")
    k = np.arange(n_antennas)[:, None]
    return np.exp(-1j * np.pi * k * np.sin(np.deg2rad(thetas))[None, :])


def _complex_gaussian(rng, shape, power):
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_snapshots(cfg: ArrayConfig, scn: SourceScenario) -> np.ndarray:
    """Simulate one ``N x T`` snapshot matrix for the given scenario.

    Non-coherent sources are independent CN(0, p) waveforms with
    ``p = 10**(snr_db/10)``.  Coherent sources are a single CN(0, p) waveform
    multiplied by an independent uniform random phase per source, so the
    source covariance has rank one.  Noise is white CN(0, 1) unless
    ``scn.noise_free``.
    """
    n, t, m = cfg.n_antennas, cfg.n_snapshots, scn.n_sources
    if m >= n:
        raise ConfigurationError(f"need fewer sources than antennas (M={m}, N={n})")
    rng = np.random.Generator(np.random.PCG64(int(scn.rng_seed)))
    power = 10.0 ** (scn.snr_db / 10.0)
    if scn.coherent:
        waveform = _complex_gaussian(rng, (1, t), power)
        gains = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=(m, 1)))
        s = gains * waveform
    else:
        s = _complex_gaussian(rng, (m, t), power)
    x = steering_matrix(scn.doas, n) @ s
    if not scn.noise_free:
        x = x + _complex_gaussian(rng, (n, t), 1.0)
    return x


def sample_covariance(x) -> np.ndarray:
    """Sample covariance ``X X^H / T``, symmetrised to be exactly Hermitian."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise ShapeError(f"snapshot matrix must be 2-D, got shape {x.shape}")
    if x.shape[1] < 1:
        raise ShapeError("need at least one snapshot")
    r = (x @ x.conj().T) / x.shape[1]
    return 0.5 * (r + r.conj().T)


def sample_doas(rng, m, min_separation_deg=15.0, low=-90.0, high=90.0):
    """Draw ``m`` uniform angles in ``[low, high]`` with a minimum pairwise gap.

    Rejection sampling; gives up after :data:`MAX_DOA_ATTEMPTS` draws so the
    caller can re-seed.  Returns ``None`` on failure.
    """
    for _ in range(MAX_DOA_ATTEMPTS):
        doas = rng.uniform(low, high, size=m)
        if m == 1:
            return doas
        gaps = np.diff(np.sort(doas))
        if gaps.min() >= min_separation_deg:
            return doas
    return None


def doa_rng(seed, attempt=0):
    """Generator for the DoA draw of sample ``seed``, independent of its signal stream."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(1, attempt))
    return np.random.Generator(np.random.PCG64(ss))


def random_scenario(seed, m, snr_db, coherent, min_separation_deg=15.0):
    """Scenario with randomly drawn DoAs, reproducible from ``seed`` alone."""
    attempt = 0
    while True:
        doas = sample_doas(doa_rng(seed, attempt), m, min_separation_deg)
        if doas is not None:
            break
        attempt += 1
        if attempt > 100:
            raise ConfigurationError(
                f"cannot place {m} sources {min_separation_deg} deg apart in [-90, 90]"
            )
    return SourceScenario(
        doas_deg=tuple(float(d) for d in doas),
        snr_db=float(snr_db),
        coherent=bool(coherent),
        rng_seed=int(seed),
        min_separation_deg=min_separation_deg,
    )
