"""
The command-line pipeline
=========================

``hyperdoa gen-data``, ``train``, ``eval`` and ``spectrum`` chained through
files, driven by one YAML config.  Calls ``main`` in-process; the shell
equivalents are shown in the comments.
"""

import pathlib
import tempfile

from hyperdoa.cli import main
from hyperdoa.evaluation import read_report, report_rows

work = pathlib.Path(tempfile.mkdtemp())
(work / "run.yaml").write_text(
    "m_sources: 1\ncoherent: false\nsnr_list_db: [10]\ntrain_size: 500\ntest_size: 20\nfeature_method: lag\n"
)
cfg = ["--config", str(work / "run.yaml")]

# hyperdoa gen-data --config run.yaml --split train -o train.bin
main(["gen-data", *cfg, "--split", "train", "-o", str(work / "train.bin")])
main(["gen-data", *cfg, "--split", "test", "-o", str(work / "test.bin")])
# hyperdoa train --config run.yaml --data train.bin -o model.bin
main(["train", *cfg, "--data", str(work / "train.bin"), "-o", str(work / "model.bin")])
# hyperdoa eval --config run.yaml --model model.bin --data test.bin -o report.json
main(["eval", *cfg, "--model", str(work / "model.bin"), "--data", str(work / "test.bin"),
      "-o", str(work / "hdc.json")])
main(["eval", *cfg, "--method", "music", "--data", str(work / "test.bin"), "-o", str(work / "music.json")])
for name in ("hdc.json", "music.json"):
    print(report_rows(read_report(work / name)))

# --set overrides any key; here a bad one exits with code 2
print("exit code:", main(["gen-data", *cfg, "--set", "m_sources=9", "-o", str(work / "x.bin")]))

main(["spectrum", *cfg, "--model", str(work / "model.bin"), "--data", str(work / "test.bin"),
      "--index", "0", "-o", str(work / "spec.csv")])
print((work / "spec.csv").read_text().splitlines()[1:4])
