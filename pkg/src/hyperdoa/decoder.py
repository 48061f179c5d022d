"""Greedy non-maximum suppression over a pseudo-spectrum."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DecodingError
from . import trace


@dataclass(frozen=True)
class DecoderConfig:
    n_sources: int
    min_separation_deg: float = 6.0

    def __post_init__(self):
        if self.n_sources < 1:
            raise ConfigurationError("n_sources must be >= 1")
        if not 0 < self.min_separation_deg < 180:
            raise ConfigurationError("min_separation_deg must lie in (0, 180)")


@dataclass
class DoaEstimate:
    angles_deg: np.ndarray
    scores: np.ndarray


def _window_steps(separation_deg, resolution_deg):
    # Grid points at exactly the separation distance are suppressed too.
    return int(math.floor(separation_deg / resolution_deg + 1e-9))


def decode_scores(scores, angles, resolution_deg, cfg: DecoderConfig):
    """Pick ``cfg.n_sources`` peaks from a score vector on a uniform grid.

    Repeatedly takes the global maximum of the surviving scores (lowest
    angle on ties) and removes every grid point within
    ``min_separation_deg`` of it, window inclusive.  No wrap-around at the
    +-90 deg ends.
    """
    trace.record("decode")
    scores = np.asarray(scores, dtype=np.float64)
    alive = np.ones(scores.shape[0], dtype=bool)
    w = _window_steps(cfg.min_separation_deg, resolution_deg)
    picked = []
    for _ in range(cfg.n_sources):
        if not alive.any():
            raise DecodingError(
                f"only {len(picked)} of {cfg.n_sources} peaks fit with "
                f"{cfg.min_separation_deg} deg separation",
                found=len(picked),
            )
        masked = np.where(alive, scores, -np.inf)
        k = int(np.argmax(masked))
        if masked[k] == -np.inf:
            # every surviving score is -inf; argmax still picks the lowest alive index
            k = int(np.flatnonzero(alive)[0])
        picked.append(k)
        alive[max(0, k - w) : k + w + 1] = False
    idx = np.array(picked)
    return DoaEstimate(np.asarray(angles)[idx].astype(np.float64), scores[idx])


def decode(spec, cfg: DecoderConfig):
    """Decode a :class:`~hyperdoa.memory.PseudoSpectrum`."""
    return decode_scores(spec.scores, spec.grid.angles, spec.grid.resolution_deg, cfg)
