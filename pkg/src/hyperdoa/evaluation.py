"""
MSPE scoring and experiment runs.

The error of one estimate is the best assignment between estimated and true
angles of the squared periodic distance (period 180 deg, in radians),
averaged over sources.  MSPE(dB) is ``10 log10`` of its mean over scored
samples.
"""

import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .dataset import generate_dataset
from .decoder import decode_scores
from .errors import DecodingError, ReportError, ShapeError
from .features import FeatureMethod, fit_normalizer, spatial_smoothing
from .hdc import encode_batch
from .memory import train
from .music import music_spectrum
from .signal_model import sample_covariance

log = logging.getLogger(__name__)

REPORT_FORMAT = "hyperdoa-report"
REPORT_VERSION = 1
FAILURE_PENALTY = (math.pi / 2) ** 2  # largest possible periodic squared error
QUERY_BATCH = 256


def periodic_diff(est_deg, true_deg):
    """Signed angular difference in radians wrapped to [-pi/2, pi/2)."""
    delta = np.deg2rad(np.asarray(est_deg, dtype=np.float64) - np.asarray(true_deg, dtype=np.float64))
    return np.mod(delta + np.pi / 2, np.pi) - np.pi / 2


def periodic_sq_error(est_deg, true_deg):
    est = np.atleast_1d(np.asarray(est_deg, dtype=np.float64))
    true = np.atleast_1d(np.asarray(true_deg, dtype=np.float64))
    if est.shape != true.shape:
        raise ShapeError(f"estimate has {est.size} angles, truth has {true.size}")
    return min(
        float(np.mean(periodic_diff(est[list(p)], true) ** 2))
        for p in itertools.permutations(range(est.size))
    )


def mspe_db(errors):
    errors = np.asarray(errors, dtype=np.float64)
    if errors.size == 0:
        raise ReportError("no scored samples")
    return float(10.0 * np.log10(np.mean(errors)))


@dataclass
class MethodResult:
    method: str
    snr_db: float
    errors: list = field(default_factory=list)
    n_failed: int = 0
    seconds: float = 0.0


@dataclass
class MspeReport:
    """Per (method, SNR) MSPE with failure counts and the full config echo."""

    records: list
    config: dict
    sample_count: int
    # Wall-clock seconds per inference, by method.  In-memory only so exported
    # reports stay byte-identical across runs.
    timing: dict = field(default_factory=dict, compare=False)

    def mspe(self, method, snr_db):
        for r in self.records:
            if r["method"] == method and r["snr_db"] == snr_db:
                return r["mspe_db"]
        raise KeyError((method, snr_db))

    @property
    def methods(self):
        return sorted({r["method"] for r in self.records})

    def to_dict(self):
        return {
            "format": REPORT_FORMAT,
            "format_version": REPORT_VERSION,
            "config": self.config,
            "sample_count": self.sample_count,
            "records": self.records,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != REPORT_FORMAT or d.get("format_version") != REPORT_VERSION:
            raise ReportError("not a hyperdoa report (or unsupported version)")
        return cls(d["records"], d["config"], d["sample_count"])


def make_records(results, failure_policy="exclude"):
    records = []
    for res in results:
        errors = list(res.errors)
        if failure_policy == "penalty":
            errors += [FAILURE_PENALTY] * res.n_failed
        records.append(
            {
                "method": res.method,
                "snr_db": float(res.snr_db),
                "mspe_db": mspe_db(errors) if errors else None,
                "n_scored": len(errors),
                "n_failed": res.n_failed,
            }
        )
    records.sort(key=lambda r: (r["method"], r["snr_db"]))
    return records


def export_report(report, path):
    """Write the report as sorted-key JSON (one record per method x SNR)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_report(path):
    with open(path, encoding="utf-8") as fh:
        return MspeReport.from_dict(json.load(fh))


def report_rows(report):
    """Plot-ready ``(method, snr_db, mspe_db, n_scored, n_failed)`` tuples."""
    return [
        (r["method"], r["snr_db"], r["mspe_db"], r["n_scored"], r["n_failed"])
        for r in report.records
    ]


# --- scoring ------------------------------------------------------------------


def score_spectra(scores, samples, grid, dec_cfg, result):
    angles = grid.angles
    for row, s in zip(scores, samples):
        try:
            est = decode_scores(row, angles, grid.resolution_deg, dec_cfg)
        except DecodingError:
            result.n_failed += 1
            continue
        result.errors.append(periodic_sq_error(est.angles_deg, s.doas_deg))


def hdc_spectra(mem, samples):
    """Pseudo-spectra (rows) of raw samples through a trained memory."""
    out = []
    for start in range(0, len(samples), QUERY_BATCH):
        chunk = samples[start : start + QUERY_BATCH]
        hs = encode_batch(mem.basis, mem.features([s.x for s in chunk]))
        out.append(mem.query_batch(hs))
    return np.concatenate(out) if out else np.zeros((0, mem.grid.size))


def evaluate_hdc(mem, samples, dec_cfg, method="hdc", snr_db=float("nan")):
    res = MethodResult(method, snr_db)
    t0 = time.perf_counter()
    score_spectra(hdc_spectra(mem, samples), samples, mem.grid, dec_cfg, res)
    res.seconds = time.perf_counter() - t0
    return res


def music_scores(sample, m, grid, smoothing=None):
    r = sample_covariance(sample.x) if smoothing is None else spatial_smoothing(sample.x, smoothing)
    return music_spectrum(r, m, grid).scores


def evaluate_music(samples, m, grid, dec_cfg, smoothing=None, method="music", snr_db=float("nan")):
    res = MethodResult(method, snr_db)
    t0 = time.perf_counter()
    scores = [music_scores(s, m, grid, smoothing) for s in samples]
    score_spectra(scores, samples, grid, dec_cfg, res)
    res.seconds = time.perf_counter() - t0
    return res


def fit_hdc(cfg: ExperimentConfig, train_ds, method):
    """Fit normaliser and associative memory on a training dataset."""
    extractor = cfg.extractor(method)
    raw = extractor.batch([s.x for s in train_ds])
    normalizer = fit_normalizer(raw)
    feats = normalizer.transform(raw)
    mem = train(
        zip(feats, (s.doas_deg for s in train_ds)),
        cfg.grid_config(),
        cfg.basis(extractor.dim),
        cfg.memory.eta,
        cfg.memory.epochs,
        cfg.memory.adaptive,
        extractor,
        normalizer,
    )
    mem.config = cfg.to_dict()
    return mem


def train_dataset(cfg: ExperimentConfig):
    return generate_dataset(
        cfg.array_config(),
        cfg.m_sources,
        cfg.coherent,
        cfg.train_snr_list_db or cfg.snr_list_db,
        cfg.train_size,
        base_seed=cfg.base_seed,
        min_separation_deg=cfg.min_separation_deg,
        grid_resolution_deg=cfg.grid.resolution_deg,
        config=cfg.to_dict(),
    )


def held_out_split(cfg: ExperimentConfig):
    """All test buckets, ``test_size`` samples per SNR, seeds disjoint from training."""
    return generate_dataset(
        cfg.array_config(),
        cfg.m_sources,
        cfg.coherent,
        cfg.snr_list_db,
        cfg.test_size * len(cfg.snr_list_db),
        base_seed=cfg.base_seed + cfg.train_size,
        min_separation_deg=cfg.min_separation_deg,
        grid_resolution_deg=cfg.grid.resolution_deg,
        config=cfg.to_dict(),
        block_size=cfg.test_size,
    )


_HDC_METHODS = {"hdc-lag": FeatureMethod.LAG, "hdc-ss": FeatureMethod.SPATIAL_SMOOTHING}


def run_experiment(cfg: ExperimentConfig):
    """Generate data, train each requested HDC variant, and score every method per SNR."""
    grid = cfg.grid_config()
    dec = cfg.decoder_config()
    test = held_out_split(cfg)
    buckets = [test.samples[i * cfg.test_size : (i + 1) * cfg.test_size] for i in range(len(cfg.snr_list_db))]
    results, timing = [], {}
    hdc_methods = [m for m in cfg.methods if m in _HDC_METHODS]
    train_ds = train_dataset(cfg) if hdc_methods else None
    for method in hdc_methods:
        log.info("training %s on %d samples", method, len(train_ds))
        mem = fit_hdc(cfg, train_ds, _HDC_METHODS[method])
        n = 0
        for snr, ds in zip(cfg.snr_list_db, buckets):
            res = evaluate_hdc(mem, ds, dec, method, snr)
            results.append(res)
            n += len(ds)
        timing[method] = sum(r.seconds for r in results if r.method == method) / n
        del mem
    for method in cfg.methods:
        if method not in ("music", "music-ss"):
            continue
        sm = cfg.smoothing_config() if method == "music-ss" else None
        for snr, ds in zip(cfg.snr_list_db, buckets):
            results.append(evaluate_music(ds, cfg.m_sources, grid, dec, sm, method, snr))
        n = sum(len(ds) for ds in buckets)
        timing[method] = sum(r.seconds for r in results if r.method == method) / n
    records = make_records(results, cfg.failure_policy)
    for r in records:
        if r["n_scored"] == 0:
            raise ReportError(f"{r['method']} at {r['snr_db']} dB: every decode failed")
    return MspeReport(records, cfg.to_dict(), sum(len(b) for b in buckets), timing)


def sweep(cfgs):
    return [run_experiment(c) for c in cfgs]


def merge_reports(reports):
    """Combine sweep reports into one; records gain a ``run`` index."""
    records = []
    for i, rep in enumerate(reports):
        records += [dict(r, run=i) for r in rep.records]
    return MspeReport(
        records,
        {"runs": [r.config for r in reports]},
        sum(r.sample_count for r in reports),
        {},
    )
