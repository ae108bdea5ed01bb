"""Study configuration: localities, wave restriction dates and analysis defaults.

The configuration is an INI file::

    [study]
    period_length_days = 56     ; optional, default 56
    window_length_days = 14     ; optional, default 14
    epsilon = 1e-9              ; optional, dominance equality tolerance

    [stl]                       ; optional, any StlParams field
    seasonal_span = 11
    outer_iterations = 1

    [locality: Lombardia]       ; one section per locality, id after the colon
    country = Italy             ; country_region or country_region_code
    region = Lombardy           ; most specific CMR region name ('' = country)
    sub_region_1 = ...          ; optional disambiguation
    wave1_restriction_date = 2020-02-23
    wave2_restriction_date = 2020-11-06

Every default used by the analysis lives in this module.
"""
from __future__ import annotations

import configparser
import dataclasses
import datetime as dt
import io
import os
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigError
from .ingest import LocalitySelector
from .stl import StlParams

PERIOD_LENGTH_DAYS = 56
WINDOW_LENGTH_DAYS = 14
EPSILON = 1e-9
DEFAULT_STL = StlParams()

_LOCALITY_PREFIX = "locality:"
_LOCALITY_KEYS = {"country", "region", "sub_region_1", "wave1_restriction_date", "wave2_restriction_date"}
_STUDY_KEYS = {"period_length_days", "window_length_days", "epsilon"}


@dataclass(frozen=True)
class LocalityConfig:
    locality_id: str
    selector: LocalitySelector
    wave1_restriction_date: dt.date
    wave2_restriction_date: dt.date

    def __post_init__(self):
        if not self.wave1_restriction_date < self.wave2_restriction_date:
            raise ConfigError(
                f"{self.locality_id}: wave 1 restriction date {self.wave1_restriction_date} "
                f"must precede wave 2 date {self.wave2_restriction_date}"
            )

    def restriction_date(self, wave: int) -> dt.date:
        if wave == 1:
            return self.wave1_restriction_date
        if wave == 2:
            return self.wave2_restriction_date
        raise ValueError(f"wave must be 1 or 2, got {wave}")


@dataclass(frozen=True)
class StudyConfig:
    localities: tuple[LocalityConfig, ...]
    period_length_days: int = PERIOD_LENGTH_DAYS
    window_length_days: int = WINDOW_LENGTH_DAYS
    stl: StlParams = field(default_factory=lambda: DEFAULT_STL)
    epsilon: float = EPSILON

    def __post_init__(self):
        if self.window_length_days <= 0 or self.period_length_days <= 0:
            raise ConfigError("period and window lengths must be positive")
        if self.period_length_days % self.window_length_days:
            raise ConfigError(
                f"period length {self.period_length_days} is not a multiple of "
                f"window length {self.window_length_days}"
            )
        if self.epsilon < 0:
            raise ConfigError("epsilon must be non-negative")
        ids = [loc.locality_id for loc in self.localities]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate locality ids")

    @property
    def n_windows(self) -> int:
        return self.period_length_days // self.window_length_days

    def selectors(self) -> dict[str, LocalitySelector]:
        return {loc.locality_id: loc.selector for loc in self.localities}

    def locality(self, locality_id: str) -> LocalityConfig:
        for loc in self.localities:
            if loc.locality_id == locality_id:
                return loc
        raise KeyError(locality_id)

    def replace(self, **changes) -> "StudyConfig":
        return dataclasses.replace(self, **changes)

    def snapshot(self) -> dict:
        """JSON-ready description of the configuration."""
        return {
            "period_length_days": self.period_length_days,
            "window_length_days": self.window_length_days,
            "epsilon": self.epsilon,
            "stl": self.stl.as_dict(),
            "localities": [
                {
                    "locality_id": loc.locality_id,
                    "country": loc.selector.country,
                    "region": loc.selector.region,
                    "sub_region_1": loc.selector.sub_region_1,
                    "wave1_restriction_date": loc.wave1_restriction_date.isoformat(),
                    "wave2_restriction_date": loc.wave2_restriction_date.isoformat(),
                }
                for loc in self.localities
            ],
        }


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8-sig") as fh:
            return fh.read()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return data


def _parse_date(text: str, where: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise ConfigError(f"{where}: invalid ISO-8601 date {text!r}") from None


def _parse_int(text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {text!r}") from None


def _check_keys(section, allowed, name):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {sorted(unknown)}")


def load_study_config(source) -> StudyConfig:
    """Read and validate a study configuration.

    ``source`` may be a path, a text stream or a byte stream.  Period and
    window lengths default to 56 and 14 days when omitted.
    """
    parser = configparser.ConfigParser(
        interpolation=None, default_section="__defaults__", inline_comment_prefixes=(";",)
    )
    parser.optionxform = str
    try:
        parser.read_string(_read_text(source))
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None

    study = parser["study"] if parser.has_section("study") else {}
    _check_keys(study, _STUDY_KEYS, "study")
    period = _parse_int(study.get("period_length_days", str(PERIOD_LENGTH_DAYS)), "study.period_length_days")
    window = _parse_int(study.get("window_length_days", str(WINDOW_LENGTH_DAYS)), "study.window_length_days")
    try:
        epsilon = float(study.get("epsilon", repr(EPSILON)))
    except ValueError:
        raise ConfigError("study.epsilon: expected a number") from None

    stl = DEFAULT_STL
    if parser.has_section("stl"):
        names = {f.name for f in dataclasses.fields(StlParams)}
        _check_keys(parser["stl"], names, "stl")
        overrides = {k: _parse_int(v, f"stl.{k}") for k, v in parser["stl"].items()}
        stl = StlParams(**overrides)

    localities = []
    for name in parser.sections():
        if name in ("study", "stl"):
            continue
        if not name.startswith(_LOCALITY_PREFIX):
            raise ConfigError(f"unknown section [{name}]")
        loc_id = name[len(_LOCALITY_PREFIX):].strip()
        if not loc_id:
            raise ConfigError(f"[{name}]: empty locality id")
        sec = parser[name]
        _check_keys(sec, _LOCALITY_KEYS, name)
        for key in ("country", "wave1_restriction_date", "wave2_restriction_date"):
            if key not in sec:
                raise ConfigError(f"[{name}]: missing {key}")
        selector = LocalitySelector(
            country=sec["country"].strip(),
            region=sec.get("region", "").strip(),
            sub_region_1=sec["sub_region_1"].strip() if "sub_region_1" in sec else None,
        )
        localities.append(
            LocalityConfig(
                loc_id,
                selector,
                _parse_date(sec["wave1_restriction_date"], f"{name}.wave1_restriction_date"),
                _parse_date(sec["wave2_restriction_date"], f"{name}.wave2_restriction_date"),
            )
        )
    if not localities:
        raise ConfigError("configuration defines no localities")
    return StudyConfig(tuple(localities), period, window, stl, epsilon)


def bundled_study_config() -> StudyConfig:
    """Five-locality study (restriction dates in 2020) bundled with the package."""
    text = resources.files("mobwave").joinpath("data/study_2020.ini").read_text(encoding="utf-8")
    return load_study_config(io.StringIO(text))
