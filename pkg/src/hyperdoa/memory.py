"""
Associative memory of per-angle centroid hypervectors.

Training only ever adds: for a sample with query hypervector ``H`` and true
DoAs ``{theta_1..theta_M}``, the centroid at the grid point nearest each
``theta_i`` receives ``+eta * H``.  After the last epoch every non-zero
centroid is rescaled to norm ``sqrt(D)`` so that ``similarity(C, C) == 1``,
the same convention as encoder outputs.  Querying returns the similarity of
a hypervector to every centroid: the angular pseudo-spectrum.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import read_header_line
from .errors import (
    ConfigurationError,
    FormatError,
    LabelError,
    ShapeError,
    StateError,
    TrainingError,
    TruncatedFileError,
)
from .features import FeatureExtractor, Normalizer
from .hdc import EncoderBasis, encode_batch
from . import trace

MODEL_FORMAT = "hyperdoa-model"
MODEL_VERSION = 1
ENCODE_BATCH = 256


@dataclass(frozen=True)
class AngularGrid:
    min_deg: float = -90.0
    max_deg: float = 90.0
    resolution_deg: float = 0.1

    def __post_init__(self):
        if not self.resolution_deg > 0:
            raise ConfigurationError("grid resolution must be positive")
        if not self.max_deg > self.min_deg:
            raise ConfigurationError("grid max must exceed grid min")

    @property
    def size(self):
        return int(math.floor((self.max_deg - self.min_deg) / self.resolution_deg + 1e-9)) + 1

    @property
    def angles(self):
        # rounding makes e.g. -83.9 print and compare as written
        return np.round(self.min_deg + np.arange(self.size) * self.resolution_deg, 9)

    def index_of(self, theta_deg):
        """Nearest grid index; exact half-way ties go to the lower angle."""
        theta = float(theta_deg)
        if not (self.min_deg <= theta <= self.max_deg):
            raise LabelError(
                f"label {theta} deg outside grid [{self.min_deg}, {self.max_deg}]"
            )
        k = math.ceil((theta - self.min_deg) / self.resolution_deg - 0.5)
        return min(max(k, 0), self.size - 1)

    def snap(self, theta_deg):
        return float(self.angles[self.index_of(theta_deg)])

    def to_dict(self):
        return {"min_deg": self.min_deg, "max_deg": self.max_deg, "resolution_deg": self.resolution_deg}


@dataclass
class PseudoSpectrum:
    scores: np.ndarray
    grid: AngularGrid

    @property
    def angles(self):
        return self.grid.angles

    def peak(self):
        return float(self.angles[int(np.argmax(self.scores))])


def normalize_rows(c):
    """Rescale every non-zero row to Euclidean norm ``sqrt(D)``; zero rows stay zero."""
    d = c.shape[1]
    norms = np.linalg.norm(c, axis=1)
    out = c.copy()
    nz = norms > 0
    out[nz] *= (math.sqrt(d) / norms[nz])[:, None]
    return out


class AssociativeMemory:
    """Centroid matrix over an :class:`AngularGrid` plus everything needed to query it.

    Parameters
    ----------
    grid : AngularGrid
    basis : EncoderBasis
    eta : float
        Learning rate of the positive update.
    adaptive : bool
        Scale each update by ``1 - cos(H, C)`` (OnlineHD-style) instead of the
        plain ``C += eta * H``.  Off by default.
    extractor, normalizer : optional
        Feature pipeline that produced the training features; stored with
        the model so a loaded memory can encode raw snapshot matrices.
    """

    def __init__(self, grid, basis, eta=1.0, adaptive=False, extractor=None, normalizer=None):
        if not eta > 0:
            raise ConfigurationError(f"eta must be positive, got {eta}")
        self.grid = grid
        self.basis = basis
        self.eta = float(eta)
        self.adaptive = bool(adaptive)
        self.extractor = extractor
        self.normalizer = normalizer
        self.centroids = np.zeros((grid.size, basis.dim), dtype=np.complex128)
        self.normalized = False
        self.epochs = 0
        self.sample_count = 0
        self.config = {}

    @property
    def dim(self):
        return self.basis.dim

    @property
    def trained_mask(self):
        """True for grid points whose centroid received at least one update."""
        return np.any(self.centroids != 0, axis=1)

    def update(self, h, label_indices):
        if self.normalized:
            raise StateError("memory is finalised; no further updates allowed")
        for k in label_indices:
            c = self.centroids[k]
            if self.adaptive:
                norm = np.linalg.norm(c)
                cos = np.vdot(c, h).real / (norm * math.sqrt(self.dim)) if norm > 0 else 0.0
                gain = self.eta * (1.0 - cos)
            else:
                gain = self.eta
            # Positive-only: a centroid never loses mass from any sample.
            assert gain >= 0
            c += gain * h

    def finalize(self):
        if not self.normalized:
            self.centroids = normalize_rows(self.centroids)
            self.normalized = True
        return self

    def query_batch(self, hs):
        """Scores of every hypervector row of ``hs`` against every centroid."""
        if not self.normalized:
            raise StateError("memory must be finalised before querying")
        trace.record("query")
        hs = np.atleast_2d(np.ascontiguousarray(hs, dtype=np.complex128))
        if hs.shape[1] != self.dim:
            raise ShapeError(f"hypervector length {hs.shape[1]} != memory dim {self.dim}")
        # Re(h . conj(c)) is the real dot product of the interleaved (re, im) views.
        return (hs.view(np.float64) @ self.centroids.view(np.float64).T) / self.dim

    def query(self, h):
        return PseudoSpectrum(self.query_batch(h)[0], self.grid)

    def features(self, xs):
        if self.extractor is None or self.normalizer is None:
            raise StateError("memory has no stored feature pipeline")
        return self.normalizer.transform(self.extractor.batch(xs))

    def spectrum_of(self, x):
        """Pseudo-spectrum of a raw snapshot matrix."""
        h = encode_batch(self.basis, self.features([x]))
        return PseudoSpectrum(self.query_batch(h)[0], self.grid)

    def header(self):
        return {
            "format": MODEL_FORMAT,
            "format_version": MODEL_VERSION,
            "grid": self.grid.to_dict(),
            "encoder": self.basis.header(),
            "features": self.extractor.to_dict() if self.extractor else None,
            "normalizer": self.normalizer.to_dict() if self.normalizer else None,
            "eta": self.eta,
            "epochs": self.epochs,
            "adaptive": self.adaptive,
            "sample_count": self.sample_count,
            "normalized": self.normalized,
            "config": self.config,
        }


def _label_indices(grid, labels):
    return [grid.index_of(t) for t in np.atleast_1d(labels)]


def train(samples, grid, basis, eta=1.0, epochs=1, adaptive=False, extractor=None, normalizer=None):
    """Build and finalise an associative memory.

    Parameters
    ----------
    samples : sequence of (features, doas_deg)
        ``features`` is a (normalised) feature vector or :class:`FeatureVector`;
        ``doas_deg`` the true source directions of that sample.
    grid : AngularGrid
    basis : EncoderBasis
    eta : float
    epochs : int
        Passes over the data, each in dataset order.
    adaptive : bool
        See :class:`AssociativeMemory`.

    Returns
    -------
    AssociativeMemory
        Finalised memory.
    """
    samples = list(samples)
    if not samples:
        raise TrainingError("cannot train on an empty dataset")
    if epochs < 1:
        raise TrainingError("epochs must be >= 1")
    feats = np.stack([np.asarray(getattr(f, "values", f), dtype=np.float64) for f, _ in samples])
    labels = [_label_indices(grid, doas) for _, doas in samples]
    mem = AssociativeMemory(grid, basis, eta, adaptive, extractor, normalizer)
    for _ in range(epochs):
        for start in range(0, len(samples), ENCODE_BATCH):
            hs = encode_batch(basis, feats[start : start + ENCODE_BATCH])
            for h, idx in zip(hs, labels[start : start + ENCODE_BATCH]):
                mem.update(h, idx)
    mem.epochs = int(epochs)
    mem.sample_count = len(samples)
    return mem.finalize()


def query(mem: AssociativeMemory, h):
    return mem.query(h)


def save(mem: AssociativeMemory, path):
    c = np.ascontiguousarray(mem.centroids, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(json.dumps(mem.header(), sort_keys=True).encode("utf-8") + b"\n")
        fh.write(memoryview(c.view("<f8").reshape(-1)).cast("B"))


def load(path) -> AssociativeMemory:
    with open(Path(path), "rb") as fh:
        h = read_header_line(fh, MODEL_FORMAT, MODEL_VERSION)
        grid = AngularGrid(**h["grid"])
        basis = EncoderBasis.from_header(h["encoder"])
        extractor = FeatureExtractor.from_dict(h["features"]) if h["features"] else None
        normalizer = Normalizer.from_dict(h["normalizer"]) if h["normalizer"] else None
        mem = AssociativeMemory(grid, basis, h["eta"], h["adaptive"], extractor, normalizer)
        buf = mem.centroids.view(np.uint8).reshape(-1)
        got = fh.readinto(memoryview(buf))
        if got != buf.size:
            raise TruncatedFileError(f"model payload has {got} bytes, expected {buf.size}")
        if fh.read(1):
            raise FormatError("model file has trailing bytes beyond the centroid matrix")
    mem.normalized = bool(h["normalized"])
    mem.epochs = int(h["epochs"])
    mem.sample_count = int(h["sample_count"])
    mem.config = h["config"]
    return mem
