"""
Associative memory and decoding
===============================

One centroid per 0.1 degree grid point, trained with positive updates only.
A query yields a pseudo-spectrum of similarities, and greedy peak picking
with a 6 degree exclusion window turns it into M angle estimates.
"""

import numpy as np

from hyperdoa import DecoderConfig, ExperimentConfig, decode
from hyperdoa.evaluation import fit_hdc, held_out_split, train_dataset

cfg = ExperimentConfig(m_sources=2, coherent=True, snr_list_db=[5.0], train_size=2000, test_size=5)
mem = fit_hdc(cfg, train_dataset(cfg).samples, "spatial_smoothing")
print(f"{mem.trained_mask.sum()} of {mem.grid.size} grid points have a centroid")

for s in held_out_split(cfg):
    spec = mem.spectrum_of(s.x)
    est = decode(spec, DecoderConfig(2))
    print("truth", np.round(np.sort(s.doas_deg), 1), "estimate", np.sort(est.angles_deg))

# the spectrum itself is plot-ready: angles vs scores
spec = mem.spectrum_of(held_out_split(cfg)[0].x)
top = np.argsort(spec.scores)[::-1][:5]
print(np.column_stack([spec.angles[top], np.round(spec.scores[top], 3)]))
