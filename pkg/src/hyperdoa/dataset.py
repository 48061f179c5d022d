"""
Seeded datasets of snapshot matrices and their on-disk format.

File layout: one line of UTF-8 JSON (the header, keys sorted) terminated by
``\\n``, followed by ``sample_count`` little-endian binary records::

    uint64  seed
    float64 snr_db
    float64 doas_deg[M]
    float64 X[N*T*2]      row-major, interleaved (re, im)

Sample ``i`` always uses ``seed = base_seed + i`` so samples can be produced
in any order (or in parallel) and still agree bit-for-bit.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, FormatError, TruncatedFileError, VersionError
from .signal_model import RNG_NAME, ArrayConfig, generate_snapshots, random_scenario

DATASET_FORMAT = "hyperdoa-dataset"
DATASET_VERSION = 1


@dataclass
class Sample:
    seed: int
    snr_db: float
    doas_deg: np.ndarray
    x: np.ndarray


@dataclass
class Dataset:
    header: dict
    samples: list

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def snr_values(self):
        return sorted({s.snr_db for s in self.samples})

    def buckets(self):
        """Samples grouped by SNR, ascending."""
        return [(snr, [s for s in self.samples if s.snr_db == snr]) for snr in self.snr_values]


def make_sample(array: ArrayConfig, seed, m, snr_db, coherent, min_separation_deg=15.0):
    scn = random_scenario(seed, m, snr_db, coherent, min_separation_deg)
    return Sample(int(seed), float(snr_db), scn.doas, generate_snapshots(array, scn))


def generate_dataset(
    array: ArrayConfig,
    m_sources,
    coherent,
    snr_list_db,
    count,
    base_seed=0,
    min_separation_deg=15.0,
    grid_resolution_deg=0.1,
    config=None,
    block_size=None,
):
    """Generate ``count`` samples with seeds ``base_seed + i``.

    Sample ``i`` is drawn at ``snr_list_db[i % len]``, or, when ``block_size``
    is given, at ``snr_list_db[i // block_size]`` (consecutive SNR buckets).
    """
    if m_sources < 1 or m_sources >= array.n_antennas:
        raise ConfigurationError(
            f"need 1 <= M < N, got M={m_sources}, N={array.n_antennas}"
        )
    snrs = [float(s) for s in snr_list_db]
    if not snrs:
        raise ConfigurationError("snr_list_db is empty")
    if count < 1:
        raise ConfigurationError("sample count must be >= 1")
    if block_size:
        if count > block_size * len(snrs):
            raise ConfigurationError("more samples than SNR buckets can hold")
        snr_of = [snrs[i // block_size] for i in range(count)]
    else:
        snr_of = [snrs[i % len(snrs)] for i in range(count)]
    samples = [
        make_sample(array, base_seed + i, m_sources, snr_of[i], coherent, min_separation_deg)
        for i in range(count)
    ]
    header = {
        "format": DATASET_FORMAT,
        "format_version": DATASET_VERSION,
        "N": array.n_antennas,
        "T": array.n_snapshots,
        "M": int(m_sources),
        "coherent": bool(coherent),
        "snr_range_db": [min(snrs), max(snrs)],
        "snr_list_db": snrs,
        "snr_block_size": int(block_size or 0),
        "min_separation_deg": float(min_separation_deg),
        "grid_resolution_deg": float(grid_resolution_deg),
        "rng": RNG_NAME,
        "base_seed": int(base_seed),
        "sample_count": int(count),
        "config": config or {},
    }
    return Dataset(header, samples)


def _record_dtype(n, t, m):
    return np.dtype(
        [("seed", "<u8"), ("snr_db", "<f8"), ("doas", "<f8", (m,)), ("x", "<f8", (n * t * 2,))]
    )


def write_dataset(path, ds: Dataset):
    h = ds.header
    n, t, m = h["N"], h["T"], h["M"]
    rec = np.zeros(len(ds.samples), dtype=_record_dtype(n, t, m))
    for i, s in enumerate(ds.samples):
        rec[i]["seed"] = s.seed
        rec[i]["snr_db"] = s.snr_db
        rec[i]["doas"] = s.doas_deg
        rec[i]["x"] = np.ascontiguousarray(s.x, dtype=np.complex128).view(np.float64).ravel()
    with open(path, "wb") as fh:
        fh.write(json.dumps(h, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(rec.tobytes())


def read_header_line(fh, expected_format, expected_version):
    line = fh.readline()
    if not line.endswith(b"\n"):
        raise TruncatedFileError("file ends inside the header")
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable header: {exc}") from None
    if header.get("format") != expected_format:
        raise FormatError(f"not a {expected_format} file (format={header.get('format')!r})")
    if header.get("format_version") != expected_version:
        raise VersionError(
            f"{expected_format} version {header.get('format_version')} is not supported "
            f"(expected {expected_version})"
        )
    return header


def read_dataset(path) -> Dataset:
    with open(Path(path), "rb") as fh:
        h = read_header_line(fh, DATASET_FORMAT, DATASET_VERSION)
        payload = fh.read()
    n, t, m, count = h["N"], h["T"], h["M"], h["sample_count"]
    dt = _record_dtype(n, t, m)
    if len(payload) != dt.itemsize * count:
        raise TruncatedFileError(
            f"dataset payload has {len(payload)} bytes, expected {dt.itemsize * count}"
        )
    rec = np.frombuffer(payload, dtype=dt)
    samples = [
        Sample(
            int(r["seed"]),
            float(r["snr_db"]),
            np.array(r["doas"], dtype=np.float64),
            np.array(r["x"]).view(np.complex128).reshape(n, t),
        )
        for r in rec
    ]
    return Dataset(h, samples)
