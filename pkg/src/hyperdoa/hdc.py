"""
FHRR fractional-power encoding.

Each feature dimension ``i`` owns a random base hypervector whose elements
are unit phasors ``exp(j phi_{i,d})`` with ``phi`` uniform on (-pi, pi].
Raising it to the power ``f_i`` rotates every phase by ``f_i * phi_{i,d}``,
and binding the rotated bases is element-wise multiplication, so the whole
encoding collapses to one phase accumulation::

    H[d] = exp(j * bandwidth * sum_i f_i * phi_{i,d})

The expected similarity between ``encode(f)`` and ``encode(g)`` is the
product over dimensions of ``sinc(bandwidth * (f_i - g_i))`` (numpy's
normalised sinc), a shift-invariant kernel.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, ShapeError
from .signal_model import RNG_NAME
from . import trace


# 1 / std of a uniform(-pi, pi] phase: bandwidth * phi then has unit variance and
# the kernel is ~exp(-delta**2 / 2) near zero, i.e. one z-score unit wide.
UNIT_VARIANCE_BANDWIDTH = math.sqrt(3.0) / math.pi


def basis_seed_sequence(seed):
    # Own spawn key so a basis never shares a stream with dataset sample ``seed``.
    return np.random.SeedSequence(int(seed), spawn_key=(2,))


@dataclass(frozen=True)
class EncoderBasis:
    feature_dim: int
    dim: int = 10_000
    bandwidth: float = UNIT_VARIANCE_BANDWIDTH
    seed: int = 0
    base_phases: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.feature_dim < 1 or self.dim < 1:
            raise ConfigurationError("feature_dim and dim must be >= 1")
        if not (self.bandwidth > 0 and np.isfinite(self.bandwidth)):
            raise ConfigurationError(f"bandwidth must be positive, got {self.bandwidth}")
        rng = np.random.Generator(np.random.PCG64(basis_seed_sequence(self.seed)))
        # pi - U[0, 2pi) lies in (-pi, pi]
        phases = np.pi - rng.uniform(0.0, 2.0 * np.pi, size=(self.feature_dim, self.dim))
        phases.setflags(write=False)
        object.__setattr__(self, "base_phases", phases)

    def base_vectors(self):
        """The unit-phasor base hypervectors ``B_i`` as rows."""
        return np.exp(1j * self.base_phases)

    def header(self):
        return {
            "feature_dim": int(self.feature_dim),
            "D": int(self.dim),
            "bandwidth": float(self.bandwidth),
            "seed": int(self.seed),
            "rng": RNG_NAME,
            "seed_spawn_key": [2],
            "phase_distribution": "uniform(-pi, pi]",
        }

    @classmethod
    def from_header(cls, h):
        if h.get("rng", RNG_NAME) != RNG_NAME:
            raise ConfigurationError(f"unsupported basis rng {h['rng']!r}")
        return cls(int(h["feature_dim"]), int(h["D"]), float(h["bandwidth"]), int(h["seed"]))


def new_basis(feature_dim, d=10_000, bandwidth=UNIT_VARIANCE_BANDWIDTH, seed=0):
    return EncoderBasis(feature_dim, d, bandwidth, seed)


def _values(f):
    return np.asarray(getattr(f, "values", f), dtype=np.float64)


def encode_batch(basis: EncoderBasis, features):
    """Encode a ``(n, feature_dim)`` array into ``(n, D)`` unit-modulus hypervectors."""
    trace.record("encode")
    f = np.atleast_2d(_values(features))
    if f.shape[-1] != basis.feature_dim:
        raise ShapeError(f"feature dim {f.shape[-1]} does not match basis dim {basis.feature_dim}")
    if not np.all(np.isfinite(f)):
        raise DegenerateInputError("features contain NaN or Inf")
    # explicit accumulation keeps each row bit-identical regardless of batch size
    phases = basis.base_phases
    acc = np.zeros((f.shape[0], basis.dim))
    for k in range(basis.feature_dim):
        acc += f[:, k, None] * phases[k]
    return np.exp(1j * (basis.bandwidth * acc))


def encode(basis: EncoderBasis, f):
    v = _values(f)
    if v.ndim != 1:
        raise ShapeError(f"encode expects a single feature vector, got shape {v.shape}")
    return encode_batch(basis, v)[0]


def similarity(a, b):
    """``Re(sum a * conj(b)) / D``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"similarity needs equal-length vectors, got {a.shape} and {b.shape}")
    return float(np.vdot(b, a).real / a.shape[0])


def expected_similarity(delta, bandwidth=1.0):
    """Mean similarity of encodings whose features differ by ``delta`` (over random bases)."""
    return float(np.prod(np.sinc(bandwidth * np.asarray(delta, dtype=np.float64))))
