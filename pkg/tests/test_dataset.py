import json

import numpy as np
import pytest

from hyperdoa.dataset import generate_dataset, make_sample, read_dataset, write_dataset
from hyperdoa.errors import ConfigurationError, TruncatedFileError, VersionError
from hyperdoa.signal_model import ArrayConfig


@pytest.fixture
def small():
    return generate_dataset(ArrayConfig(6, 20), 2, True, [-1.0, 4.0], 7, base_seed=100)


def test_round_trip(small, tmp_path):
    p = tmp_path / "d.bin"
    write_dataset(p, small)
    back = read_dataset(p)
    assert back.header == small.header
    for a, b in zip(small, back):
        assert a.seed == b.seed and a.snr_db == b.snr_db
        np.testing.assert_array_equal(a.doas_deg, b.doas_deg)
        np.testing.assert_array_equal(a.x, b.x)


def test_rewrite_identical_bytes(small, tmp_path):
    write_dataset(tmp_path / "a.bin", small)
    write_dataset(tmp_path / "b.bin", read_dataset(tmp_path / "a.bin"))
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_record_layout(small, tmp_path):
    p = tmp_path / "d.bin"
    write_dataset(p, small)
    head, body = p.read_bytes().split(b"\n", 1)
    h = json.loads(head)
    assert h["rng"] == "numpy.PCG64" and h["sample_count"] == 7
    rec = 8 + 8 + 2 * 8 + 6 * 20 * 2 * 8
    assert len(body) == 7 * rec
    first = body[:rec]
    assert int.from_bytes(first[:8], "little") == 100
    x = np.frombuffer(first[32:], dtype="<f8")
    assert x[0] == small[0].x[0, 0].real and x[1] == small[0].x[0, 0].imag
    assert x[2] == small[0].x[0, 1].real  # row-major


def test_sample_i_is_independent_of_batch(small):
    # seed = base_seed + i, so any sample can be regenerated alone
    s = make_sample(ArrayConfig(6, 20), 103, 2, small[3].snr_db, True)
    np.testing.assert_array_equal(s.x, small[3].x)
    np.testing.assert_array_equal(s.doas_deg, small[3].doas_deg)


def test_snr_schedule():
    ds = generate_dataset(ArrayConfig(4, 5), 1, False, [0, 1, 2], 6)
    assert [s.snr_db for s in ds] == [0, 1, 2, 0, 1, 2]
    ds = generate_dataset(ArrayConfig(4, 5), 1, False, [0, 1, 2], 6, block_size=2)
    assert [s.snr_db for s in ds] == [0, 0, 1, 1, 2, 2]
    assert [snr for snr, _ in ds.buckets()] == [0, 1, 2]


def test_too_many_sources():
    with pytest.raises(ConfigurationError):
        generate_dataset(ArrayConfig(8, 10), 9, True, [0], 1)


def test_truncated(small, tmp_path):
    p = tmp_path / "d.bin"
    write_dataset(p, small)
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(TruncatedFileError):
        read_dataset(p)


def test_version(small, tmp_path):
    p = tmp_path / "d.bin"
    small.header["format_version"] = 2
    write_dataset(p, small)
    with pytest.raises(VersionError):
        read_dataset(p)
