"""
MUSIC baseline
==============

Noise-subspace scanning on the same grid and decoder.  With coherent
sources plain MUSIC loses a subspace dimension; smoothing restores it.
"""

import numpy as np

from hyperdoa import (
    AngularGrid,
    ArrayConfig,
    DecoderConfig,
    SmoothingConfig,
    SourceScenario,
    decode,
    generate_snapshots,
    music_estimate,
    music_spectrum,
    spatial_smoothing,
)

grid = AngularGrid()
truth = [-30.0, 10.0, 45.0]

x = generate_snapshots(ArrayConfig(8, 100), SourceScenario(truth, 5.0, False, 2))
print("non-coherent:", music_estimate(x, 3, grid).angles_deg)

x = generate_snapshots(ArrayConfig(8, 100), SourceScenario(truth, 5.0, True, 2))
print("coherent, plain:", music_estimate(x, 3, grid).angles_deg)
rss = spatial_smoothing(x, SmoothingConfig.default(8))
print("coherent, smoothed:", decode(music_spectrum(rss, 3, grid), DecoderConfig(3)).angles_deg)
print("truth:", np.array(truth))
