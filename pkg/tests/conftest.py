import io
from collections import OrderedDict

import pytest

from mobwave.config import bundled_study_config
from mobwave.synthetic import synthetic_cmr_csv

_criteria = OrderedDict()


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.when == "call" or call.excinfo is not None:
        entry["ran"] = True
        if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
            entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, entry in _criteria.items():
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']}")


@pytest.fixture(scope="session")
def study():
    return bundled_study_config()


@pytest.fixture(scope="session")
def synthetic_bytes(study):
    return synthetic_cmr_csv(study, seed=0)


@pytest.fixture(scope="session")
def synthetic_groups(study, synthetic_bytes):
    from mobwave.ingest import parse_cmr_csv

    return parse_cmr_csv(io.BytesIO(synthetic_bytes), study.selectors())


@pytest.fixture(scope="session")
def prepared_localities(study, synthetic_groups):
    from mobwave.prepare import prepare_locality

    return {
        loc.locality_id: prepare_locality(synthetic_groups[loc.locality_id], loc.wave1_restriction_date, study.stl)
        for loc in study.localities
    }


@pytest.fixture
def study_files(tmp_path, study, synthetic_bytes):
    from importlib import resources

    cmr = tmp_path / "cmr.csv"
    cmr.write_bytes(synthetic_bytes)
    cfg = tmp_path / "study.ini"
    cfg.write_text(resources.files("mobwave").joinpath("data/study_2020.ini").read_text(encoding="utf-8"), encoding="utf-8")
    return cmr, cfg
