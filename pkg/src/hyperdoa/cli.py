"""
Command-line entry point.

    hyperdoa gen-data  --config run.yaml --split train -o train.bin
    hyperdoa train     --config run.yaml --data train.bin -o model.bin
    hyperdoa eval      --config run.yaml --model model.bin --data test.bin -o report.json
    hyperdoa eval      --config run.yaml --method music --data test.bin -o music.json
    hyperdoa spectrum  --config run.yaml --model model.bin --data test.bin --index 0 -o spec.csv
    hyperdoa sweep     --config sweep.yaml -o sweep.json

Every command takes ``--set key=value`` overrides (dotted keys for nested
sections).  Exit codes: 0 success, 2 configuration error, 3 data/file
error, 4 numerical error.
"""

import argparse
import json
import logging
import sys

import numpy as np

from .config import load_config, set_path
from .dataset import read_dataset, write_dataset
from .decoder import decode
from .errors import (
    ConfigurationError,
    DecodingError,
    DegenerateInputError,
    FormatError,
    LabelError,
    ReportError,
    ShapeError,
    StateError,
    TrainingError,
)
from .evaluation import (
    MspeReport,
    evaluate_hdc,
    evaluate_music,
    export_report,
    fit_hdc,
    held_out_split,
    make_records,
    merge_reports,
    run_experiment,
    train_dataset,
)
from .memory import load, save

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

log = logging.getLogger("hyperdoa")


def cmd_gen_data(cfg, out, split="train"):
    ds = train_dataset(cfg) if split == "train" else held_out_split(cfg)
    write_dataset(out, ds)
    return ds


def cmd_train(cfg, data_path, out):
    ds = read_dataset(data_path)
    _check_dataset(cfg, ds)
    mem = fit_hdc(cfg, ds.samples, cfg.feature_method)
    save(mem, out)
    return mem


def _check_dataset(cfg, ds):
    h = ds.header
    if h["N"] != cfg.array.n_antennas:
        raise ShapeError(f"dataset has N={h['N']} antennas but config says {cfg.array.n_antennas}")
    if h["M"] != cfg.m_sources:
        raise ShapeError(f"dataset has M={h['M']} sources but config says {cfg.m_sources}")


def cmd_eval(cfg, data_path, out, model_path=None, method="hdc"):
    ds = read_dataset(data_path)
    _check_dataset(cfg, ds)
    dec = cfg.decoder_config()
    results = []
    if method == "hdc":
        if model_path is None:
            raise ConfigurationError("eval --method hdc needs --model")
        mem = load(model_path)
        if mem.extractor.n_antennas != ds.header["N"]:
            raise ShapeError(
                f"model expects N={mem.extractor.n_antennas}, dataset has N={ds.header['N']}"
            )
        name = "hdc-lag" if mem.extractor.method.value == "lag" else "hdc-ss"
        for snr, samples in ds.buckets():
            results.append(evaluate_hdc(mem, samples, dec, name, snr))
        model_config = mem.config
    elif method in ("music", "music-ss"):
        grid = cfg.grid_config()
        sm = cfg.smoothing_config() if method == "music-ss" else None
        for snr, samples in ds.buckets():
            results.append(evaluate_music(samples, cfg.m_sources, grid, dec, sm, method, snr))
        model_config = None
    else:
        raise ConfigurationError(f"unknown eval method {method!r}")
    config = {"experiment": cfg.to_dict(), "dataset": ds.header, "model": model_config}
    report = MspeReport(make_records(results, cfg.failure_policy), config, len(ds))
    export_report(report, out)
    return report


def cmd_spectrum(cfg, model_path, data_path, index, out):
    mem = load(model_path)
    ds = read_dataset(data_path)
    if not 0 <= index < len(ds):
        raise ConfigurationError(f"sample index {index} outside dataset of {len(ds)} samples")
    sample = ds[index]
    spec = mem.spectrum_of(sample.x)
    est = decode(spec, cfg.decoder_config())
    echo = {
        "experiment": cfg.to_dict(),
        "sample": {"index": index, "seed": sample.seed, "snr_db": sample.snr_db,
                   "doas_deg": sample.doas_deg.tolist()},
        "estimate_deg": est.angles_deg.tolist(),
    }
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + json.dumps(echo, sort_keys=True) + "\n")
        fh.write("angle_deg,score\n")
        for a, s in zip(spec.angles, spec.scores):
            fh.write(f"{a:.6f},{float(s)!r}\n")
    return spec, est


def cmd_sweep(cfg, runs, out):
    """Run the base config once per entry of ``runs`` (override mappings)."""
    cfgs = []
    for overrides in runs or [{}]:
        if not isinstance(overrides, dict):
            raise ConfigurationError("each sweep entry must be a mapping of overrides")
        d = cfg.to_dict()
        for k, v in overrides.items():
            set_path(d, k, v)
        cfgs.append(type(cfg).from_dict(d))
    reports = [run_experiment(c) for c in cfgs]
    merged = merge_reports(reports)
    export_report(merged, out)
    return merged


def build_parser():
    p = argparse.ArgumentParser(prog="hyperdoa", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", "-c", help="YAML experiment config")
        sp.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key (repeatable)")
        sp.add_argument("--output", "-o", required=True)

    sp = sub.add_parser("gen-data", help="generate a seeded dataset file")
    common(sp)
    sp.add_argument("--split", choices=("train", "test"), default="train")

    sp = sub.add_parser("train", help="train an associative memory")
    common(sp)
    sp.add_argument("--data", required=True)

    sp = sub.add_parser("eval", help="score a model (or MUSIC) on a dataset")
    common(sp)
    sp.add_argument("--data", required=True)
    sp.add_argument("--model")
    sp.add_argument("--method", choices=("hdc", "music", "music-ss"), default="hdc")

    sp = sub.add_parser("spectrum", help="export the pseudo-spectrum of one sample")
    common(sp)
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--index", type=int, default=0)

    sp = sub.add_parser("sweep", help="run full experiments for each entry of the config's sweep list")
    common(sp)
    return p


def _exit_code(exc):
    if isinstance(exc, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(exc, (DegenerateInputError, DecodingError, ReportError, np.linalg.LinAlgError)):
        return EXIT_NUMERICAL
    if isinstance(exc, (FormatError, LabelError, ShapeError, StateError, TrainingError, OSError)):
        return EXIT_DATA
    return None


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg, extra = load_config(args.config, args.overrides, extra_keys=("sweep",))
        if args.command == "gen-data":
            cmd_gen_data(cfg, args.output, args.split)
        elif args.command == "train":
            cmd_train(cfg, args.data, args.output)
        elif args.command == "eval":
            cmd_eval(cfg, args.data, args.output, args.model, args.method)
        elif args.command == "spectrum":
            cmd_spectrum(cfg, args.model, args.data, args.index, args.output)
        elif args.command == "sweep":
            cmd_sweep(cfg, extra.get("sweep"), args.output)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes below
        code = _exit_code(exc)
        if code is None:
            raise
        print(f"hyperdoa {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
