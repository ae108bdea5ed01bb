# %% [markdown]
# Whole study through the command line entry point
#
# Writes the synthetic CMR file and the bundled configuration to disk, runs
# ``mobwave analyze`` and prints each locality's table.

# %%
from importlib import resources
from pathlib import Path

from mobwave import bundled_study_config
from mobwave.cli import main
from mobwave.synthetic import synthetic_cmr_csv

out = Path("demo_output")
out.mkdir(exist_ok=True)
cmr = out / "synthetic_cmr.csv"
cmr.write_bytes(synthetic_cmr_csv(bundled_study_config(), seed=0))
cfg = out / "study.ini"
cfg.write_text(resources.files("mobwave").joinpath("data/study_2020.ini").read_text(encoding="utf-8"), encoding="utf-8")

rc = main(["analyze", "--cmr", str(cmr), "--config", str(cfg), "--out", str(out / "run")])
print("exit status", rc)

# %%
for table in sorted((out / "run").glob("*/report.txt")):
    print(table.read_text(encoding="utf-8"))
