"""
Simulating a uniform linear array
=================================

Snapshots from M far-field sources hitting an 8-element half-wavelength
array, and what coherence does to their covariance.
"""

import numpy as np

from hyperdoa import ArrayConfig, SourceScenario, generate_snapshots, sample_covariance, steering_vector

# the array response to a broadside source is all ones; at 30 deg the phase
# advances by pi * sin(30 deg) = pi / 2 per element
print(np.round(steering_vector(0.0, 4), 3))
print(np.round(steering_vector(30.0, 4), 3))

array = ArrayConfig(n_antennas=8, n_snapshots=100)

# two independent sources at 5 dB each
x = generate_snapshots(array, SourceScenario([-20.0, 35.0], snr_db=5.0, rng_seed=1))
r = sample_covariance(x)
print("snapshot matrix", x.shape, x.dtype)
print("eigenvalues, non-coherent:", np.round(np.linalg.eigvalsh(r)[::-1], 2))

# the same directions with one shared waveform: the signal part of R
# collapses to rank one, which is what defeats plain subspace methods
x = generate_snapshots(array, SourceScenario([-20.0, 35.0], snr_db=5.0, coherent=True, rng_seed=1))
print("eigenvalues, coherent:    ", np.round(np.linalg.eigvalsh(sample_covariance(x))[::-1], 2))

# without noise the collapse is exact
x = generate_snapshots(array, SourceScenario([-20.0, 35.0], coherent=True, rng_seed=1, noise_free=True))
w = np.linalg.eigvalsh(sample_covariance(x))
print("rank (noise-free, coherent):", int(np.sum(w > 1e-8 * w.max())))
