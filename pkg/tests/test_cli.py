import json
import subprocess
import sys

import numpy as np
import pytest

from mobwave.cli import main, slugify

from oracles import weekly_pattern


def run(argv, capsys=None):
    rc = main([str(a) for a in argv])
    return rc


def test_full_run_layout(study_files, tmp_path):
    cmr, cfg = study_files
    out = tmp_path / "out"
    assert run(["analyze", "--cmr", cmr, "--config", cfg, "--out", out, "--diagnostics"]) == 0
    files = sorted(p.relative_to(out).as_posix() for p in out.rglob("*") if p.is_file())
    assert len([f for f in files if f.endswith("report.jsonl")]) == 5
    assert len([f for f in files if "/radar_" in f]) == 25
    assert len([f for f in files if f.endswith("series.svg")]) == 5
    assert len([f for f in files if f.endswith("diagnostics.csv")]) == 5
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stl_params"]["trend_span"] == 13
    assert manifest["config"]["period_length_days"] == 56
    assert sorted(o["path"] for o in manifest["outputs"]) == [f for f in files if f != "manifest.json"]
    assert manifest["failures"] == []
    assert {"lombardia", "ile-de-france", "birmingham-district", "berlin", "toronto-division"} == {
        f.split("/")[0] for f in files if "/" in f
    }


def test_stl_and_epsilon_overrides_recorded(study_files, tmp_path):
    cmr, cfg = study_files
    out = tmp_path / "out"
    rc = run(["analyze", "--cmr", cmr, "--config", cfg, "--out", out, "--stl-seasonal", "13", "--stl-outer", "0", "--epsilon", "0.5"])
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stl_params"]["seasonal_span"] == 13
    assert manifest["stl_params"]["outer_iterations"] == 0
    assert manifest["config"]["epsilon"] == 0.5


def test_missing_config_is_usage_error(study_files, tmp_path, capsys):
    cmr, _ = study_files
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--cmr", str(cmr), "--out", str(tmp_path / "o")])
    assert exc.value.code == 2
    assert "--config" in capsys.readouterr().err


def test_absent_locality_exits_one(study_files, tmp_path, capsys):
    cmr, cfg = study_files
    text = cfg.read_text(encoding="utf-8") + (
        "\n[locality: Atlantis]\ncountry = Nowhere\nregion = Atlantis\n"
        "wave1_restriction_date = 2020-03-01\nwave2_restriction_date = 2020-11-01\n"
    )
    cfg.write_text(text, encoding="utf-8")
    out = tmp_path / "out"
    assert run(["analyze", "--cmr", cmr, "--config", cfg, "--out", out]) == 1
    assert "Atlantis" in capsys.readouterr().err
    assert not out.exists() or not any(p.is_file() for p in out.rglob("*"))


def test_failing_locality_without_and_with_keep_going(study_files, tmp_path, capsys):
    cmr, cfg = study_files
    # a wave-2 period running past the end of the data
    cfg.write_text(cfg.read_text(encoding="utf-8").replace("2020-11-21", "2021-01-20"), encoding="utf-8")
    out = tmp_path / "strict"
    assert run(["analyze", "--cmr", cmr, "--config", cfg, "--out", out]) == 1
    assert "Toronto" in capsys.readouterr().err
    assert not out.exists() or not any(p.is_file() for p in out.rglob("*"))

    out = tmp_path / "lenient"
    assert run(["analyze", "--cmr", cmr, "--config", cfg, "--out", out, "--keep-going"]) == 1
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert [f["locality_id"] for f in manifest["failures"]] == ["Toronto Division"]
    assert (out / "berlin" / "report.jsonl").exists()
    assert not (out / "toronto-division").exists()


def test_output_dir_from_environment(study_files, tmp_path, monkeypatch):
    cmr, cfg = study_files
    out = tmp_path / "env-out"
    monkeypatch.setenv("MOBWAVE_OUT", str(out))
    assert run(["analyze", "--cmr", cmr, "--config", cfg]) == 0
    assert (out / "manifest.json").exists()
    monkeypatch.delenv("MOBWAVE_OUT")
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--cmr", str(cmr), "--config", str(cfg)])
    assert exc.value.code == 2


def test_invalid_config_exits_one(study_files, tmp_path, capsys):
    cmr, cfg = study_files
    cfg.write_text("[study]\nwindow_length_days = 13\n", encoding="utf-8")
    assert run(["analyze", "--cmr", cmr, "--config", cfg, "--out", tmp_path / "o"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def write_series(path, values, with_dates=False):
    lines = ["date,value" if with_dates else "value"]
    for i, v in enumerate(values):
        lines.append(f"2020-03-{i % 28 + 1:02d},{float(v)!r}" if with_dates else repr(float(v)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_columns(path):
    import csv

    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0] if k != "date"}


def test_decompose_constant(tmp_path):
    src, dst = tmp_path / "in.csv", tmp_path / "out.csv"
    write_series(src, [3.5] * 28)
    assert run(["decompose", "--input", src, "--period", "7", "--out", dst]) == 0
    cols = read_columns(dst)
    np.testing.assert_allclose(cols["trend"], 3.5, atol=1e-6)
    np.testing.assert_allclose(cols["value"], 3.5)


def test_decompose_periodic(tmp_path):
    src, dst = tmp_path / "in.csv", tmp_path / "out.csv"
    pattern = np.tile(weekly_pattern(1.0), 10)
    write_series(src, pattern, with_dates=True)
    assert run(["decompose", "--input", src, "--period", "7", "--out", dst]) == 0
    cols = read_columns(dst)
    np.testing.assert_allclose(cols["seasonal"], pattern, atol=1e-2)
    np.testing.assert_allclose(cols["trend"] + cols["seasonal"] + cols["remainder"], pattern, atol=1e-9)


def test_decompose_too_short(tmp_path, capsys):
    src = tmp_path / "in.csv"
    write_series(src, range(10))
    assert run(["decompose", "--input", src, "--period", "7"]) == 1
    assert "14" in capsys.readouterr().err


def test_decompose_stdout(tmp_path, capsys):
    src = tmp_path / "in.csv"
    write_series(src, range(21))
    assert run(["decompose", "--input", src, "--stl-outer", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "value,trend,seasonal,remainder,robustness_weight"
    assert len(out) == 22


def test_slugify():
    assert slugify("Île-de-France") == "ile-de-france"
    assert slugify("Birmingham District") == "birmingham-district"
    assert slugify("///") == "locality"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mobwave", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "mobwave" in proc.stdout
