"""
MUSIC baseline
==============

Classical subspace estimator on the same angular grid and the same greedy
decoder as the HDC pipeline, so both are peak-picked identically.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .decoder import DecoderConfig, decode
from .errors import ConfigurationError, ShapeError
from .memory import AngularGrid, PseudoSpectrum
from .signal_model import sample_covariance, steering_matrix
from . import trace

EPS = 1e-12


@dataclass
class SubspaceDecomposition:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns match eigenvalues
    n_sources: int

    @property
    def signal_basis(self):
        return self.eigenvectors[:, : self.n_sources]

    @property
    def noise_basis(self):
        return self.eigenvectors[:, self.n_sources :]


def subspace_decomposition(r, m):
    r = np.asarray(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ShapeError(f"covariance must be square, got {r.shape}")
    n = r.shape[0]
    if not 1 <= m < n:
        raise ConfigurationError(f"MUSIC needs 1 <= m < N, got m={m}, N={n}")
    trace.record("eigh")
    w, v = scipy.linalg.eigh(r)
    order = np.argsort(w)[::-1]
    return SubspaceDecomposition(w[order], v[:, order], m)


def music_spectrum(r, m, grid: AngularGrid = AngularGrid()):
    """``1 / (|U_N^H a(theta)|^2 + eps)`` on every grid angle."""
    dec = subspace_decomposition(r, m)
    a = steering_matrix(grid.angles, r.shape[0])
    proj = dec.noise_basis.conj().T @ a
    denom = np.sum(np.abs(proj) ** 2, axis=0)
    return PseudoSpectrum(1.0 / (denom + EPS), grid)


def music_estimate(x, m, grid: AngularGrid = AngularGrid(), cfg: DecoderConfig = None):
    if cfg is None:
        cfg = DecoderConfig(m)
    return decode(music_spectrum(sample_covariance(x), m, grid), cfg)
