"""
Experiment configuration.

A run is described by one YAML mapping whose keys mirror
:class:`ExperimentConfig`; nested sections (``array``, ``smoothing``,
``encoder``, ``grid``, ``decoder``, ``memory``) map onto the matching
sub-dataclasses.  Unknown keys are rejected with their line number.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import List, Optional

import yaml

from .decoder import DecoderConfig
from .errors import ConfigurationError
from .features import FeatureExtractor, FeatureMethod, SmoothingConfig
from .hdc import UNIT_VARIANCE_BANDWIDTH, EncoderBasis
from .memory import AngularGrid
from .signal_model import ArrayConfig

METHODS = ("hdc-lag", "hdc-ss", "music", "music-ss")


@dataclass
class ArraySection:
    n_antennas: int = 8
    n_snapshots: int = 100


@dataclass
class SmoothingSection:
    subarray_size: Optional[int] = None  # None -> N - 3


@dataclass
class EncoderSection:
    dim: int = 10_000
    bandwidth: float = UNIT_VARIANCE_BANDWIDTH
    seed: Optional[int] = None  # None -> base_seed


@dataclass
class GridSection:
    min_deg: float = -90.0
    max_deg: float = 90.0
    resolution_deg: float = 0.1


@dataclass
class DecoderSection:
    min_separation_deg: float = 6.0


@dataclass
class MemorySection:
    eta: float = 1.0
    epochs: int = 1
    adaptive: bool = False


@dataclass
class ExperimentConfig:
    array: ArraySection = field(default_factory=ArraySection)
    m_sources: int = 3
    coherent: bool = True
    snr_list_db: List[float] = field(default_factory=lambda: [1.0, 3.0, 5.0])
    train_snr_list_db: Optional[List[float]] = None  # None -> snr_list_db
    train_size: int = 5000
    test_size: int = 250
    min_separation_deg: float = 15.0
    feature_method: str = "spatial_smoothing"
    normalize_r0: bool = True
    methods: List[str] = field(default_factory=lambda: ["hdc-lag", "hdc-ss", "music"])
    smoothing: SmoothingSection = field(default_factory=SmoothingSection)
    encoder: EncoderSection = field(default_factory=EncoderSection)
    grid: GridSection = field(default_factory=GridSection)
    decoder: DecoderSection = field(default_factory=DecoderSection)
    memory: MemorySection = field(default_factory=MemorySection)
    base_seed: int = 0
    failure_policy: str = "exclude"

    def __post_init__(self):
        self.validate()

    def validate(self):
        a = self.array_config()
        if not 1 <= self.m_sources < a.n_antennas:
            raise ConfigurationError(
                f"m_sources must satisfy 1 <= M < N (M={self.m_sources}, N={a.n_antennas})"
            )
        if self.test_size < 1:
            raise ConfigurationError("test_size must be > 0")
        if self.train_size < 2:
            raise ConfigurationError("train_size must be >= 2 (normaliser needs two samples)")
        if not self.snr_list_db:
            raise ConfigurationError("snr_list_db must not be empty")
        for s in self.snr_list_db + (self.train_snr_list_db or []):
            if not isinstance(s, (int, float)) or s != s or abs(s) == float("inf"):
                raise ConfigurationError(f"SNR values must be finite numbers, got {s!r}")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigurationError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        try:
            FeatureMethod(self.feature_method)
        except ValueError:
            raise ConfigurationError(
                f"feature_method must be 'lag' or 'spatial_smoothing', got {self.feature_method!r}"
            ) from None
        if self.failure_policy not in ("exclude", "penalty"):
            raise ConfigurationError("failure_policy must be 'exclude' or 'penalty'")
        self.smoothing_config().check_sources(self.m_sources)
        self.grid_config()
        self.decoder_config()
        if self.memory.eta <= 0 or self.memory.epochs < 1:
            raise ConfigurationError("memory.eta must be > 0 and memory.epochs >= 1")
        if self.encoder.dim < 1 or self.encoder.bandwidth <= 0:
            raise ConfigurationError("encoder.dim must be >= 1 and encoder.bandwidth > 0")

    def array_config(self):
        return ArrayConfig(self.array.n_antennas, self.array.n_snapshots)

    def smoothing_config(self):
        n = self.array.n_antennas
        if self.smoothing.subarray_size is None:
            return SmoothingConfig.default(n)
        return SmoothingConfig(self.smoothing.subarray_size, n)

    def grid_config(self):
        return AngularGrid(self.grid.min_deg, self.grid.max_deg, self.grid.resolution_deg)

    def decoder_config(self):
        return DecoderConfig(self.m_sources, self.decoder.min_separation_deg)

    def extractor(self, method=None):
        method = FeatureMethod(method or self.feature_method)
        return FeatureExtractor(
            method,
            self.array.n_antennas,
            self.smoothing_config().subarray_size,
            self.normalize_r0,
        )

    def encoder_seed(self):
        return self.base_seed if self.encoder.seed is None else self.encoder.seed

    def basis(self, feature_dim):
        return EncoderBasis(feature_dim, self.encoder.dim, self.encoder.bandwidth, self.encoder_seed())

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d, lines=None):
        return _build(cls, d or {}, "", lines or {})

    def replace(self, **changes):
        d = self.to_dict()
        for k, v in changes.items():
            set_path(d, k, v)
        return ExperimentConfig.from_dict(d)


def _where(path, lines):
    line = lines.get(path)
    return f" (line {line})" if line else ""


def _build(cls, d, prefix, lines):
    if not isinstance(d, dict):
        raise ConfigurationError(f"section {prefix.rstrip('.') or '<root>'} must be a mapping{_where(prefix.rstrip('.'), lines)}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in d.items():
        path = prefix + str(key)
        if key not in fields:
            raise ConfigurationError(f"unknown config key {path!r}{_where(path, lines)}")
        sub = _SECTIONS.get(fields[key].type) if isinstance(fields[key].type, str) else None
        sub = sub or _SECTIONS.get(getattr(fields[key].type, "__name__", None))
        kwargs[key] = _build(sub, value, path + ".", lines) if sub else value
    try:
        return cls(**kwargs)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{exc}{_where(prefix.rstrip('.'), lines)}") from None
    except TypeError as exc:
        raise ConfigurationError(f"bad config section {prefix.rstrip('.') or '<root>'}: {exc}") from None


_SECTIONS = {
    c.__name__: c
    for c in (ArraySection, SmoothingSection, EncoderSection, GridSection, DecoderSection, MemorySection)
}


def set_path(d, dotted, value):
    keys = dotted.split(".")
    for k in keys[:-1]:
        d = d.setdefault(k, {})
        if not isinstance(d, dict):
            raise ConfigurationError(f"override {dotted!r} descends into a non-mapping")
    d[keys[-1]] = value


def parse_overrides(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        out[key.strip()] = yaml.safe_load(raw)
    return out


def _key_lines(node, prefix="", out=None):
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            path = prefix + str(k.value)
            out[path] = k.start_mark.line + 1
            _key_lines(v, path + ".", out)
    return out


def load_raw(path):
    """Parse a YAML config into ``(dict, {dotted_key: line})``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = yaml.safe_load(text) or {}
        lines = _key_lines(yaml.compose(text))
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return data, lines


def load_config(path=None, overrides=None, extra_keys=()):
    """Load an :class:`ExperimentConfig`, applying ``key=value`` overrides.

    Top-level keys listed in ``extra_keys`` (e.g. ``sweep``) are split off and
    returned separately rather than validated as experiment fields.
    """
    data, lines = load_raw(path) if path else ({}, {})
    for k, v in parse_overrides(overrides).items():
        set_path(data, k, v)
    extra = {k: data.pop(k) for k in list(data) if k in extra_keys}
    return ExperimentConfig.from_dict(data, lines), extra
