"""
An MSPE experiment
==================

The evaluation harness end to end at a reduced scale: generate seeded train
and test sets, train both HDC variants, score them and MUSIC per SNR.
The full protocol uses 5000 training and 250 test samples per SNR.
"""

from hyperdoa import ExperimentConfig, run_experiment
from hyperdoa.evaluation import periodic_sq_error, report_rows

# the error metric wraps at 180 degrees and matches sources optimally
print(periodic_sq_error([89.0], [-89.0]), periodic_sq_error([10.0, 50.0], [50.0, 10.0]))

cfg = ExperimentConfig(m_sources=3, coherent=True, snr_list_db=[1.0, 5.0], train_size=1500, test_size=60)
report = run_experiment(cfg)
print(f"{'method':8s} {'snr':>5s} {'MSPE dB':>8s} {'failed':>6s}")
for method, snr, mspe, n_scored, n_failed in report_rows(report):
    print(f"{method:8s} {snr:5.1f} {mspe:8.2f} {n_failed:6d}")
print("seconds per inference:", {k: round(v, 4) for k, v in report.timing.items()})
