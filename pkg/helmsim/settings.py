# helmsim/settings.py
"""Harness settings: INI file under ~/.config plus the HELMSIM_THREADS override."""

import configparser
import logging
import os
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError
from .measures import DENOM_EPS, MeasureThresholds
from .validation import require_positive

logger = logging.getLogger(__name__)

THREADS_ENV = "HELMSIM_THREADS"


def default_settings_path():
    f_home_env = os.getenv("HOME", "")
    return os.path.join(f_home_env, ".config", "helmsim.ini")


@dataclass(frozen=True)
class SimulationSettings:
    dt: float = 1.0
    steps: int = 120


@dataclass(frozen=True)
class MeasureSettings:
    denom_eps: float = DENOM_EPS
    optimal_below: float = 1.5
    satisfactory_below: float = 4.0
    r_max: float = 0.0314

    @property
    def thresholds(self):
        return MeasureThresholds(self.optimal_below, self.satisfactory_below)


@dataclass(frozen=True)
class VoyageSettings:
    gap_eps: float = 3.0
    max_anchor_distance_m: float = 50000.0
    stride: int = 0          # 0 = same as steps


@dataclass(frozen=True)
class HarnessSettings:
    threads: int = 0         # 0 = one worker per CPU


@dataclass(frozen=True)
class Settings:
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    measures: MeasureSettings = field(default_factory=MeasureSettings)
    voyage: VoyageSettings = field(default_factory=VoyageSettings)
    harness: HarnessSettings = field(default_factory=HarnessSettings)


_SECTIONS = {
    "simulation": SimulationSettings,
    "measures": MeasureSettings,
    "voyage": VoyageSettings,
    "harness": HarnessSettings,
}


def _read_section(f_config, f_name, f_cls):
    if not f_config.has_section(f_name):
        return f_cls()
    f_known = {f.name: f.type for f in fields(f_cls)}
    f_values = {}
    for f_key, f_raw in f_config[f_name].items():
        if f_key not in f_known:
            raise ConfigError("unknown setting", field=f"{f_name}.{f_key}")
        f_type = int if f_known[f_key] in (int, "int") else float
        try:
            f_values[f_key] = f_type(f_raw)
        except ValueError:
            raise ConfigError(f"expected {f_type.__name__}, got {f_raw!r}", field=f"{f_name}.{f_key}")
    return f_cls(**f_values)


def _validate(f_settings):
    require_positive("simulation.dt", f_settings.simulation.dt)
    if f_settings.simulation.steps < 1:
        raise ConfigError("must be >= 1", field="simulation.steps")
    require_positive("measures.denom_eps", f_settings.measures.denom_eps)
    require_positive("measures.r_max", f_settings.measures.r_max)
    MeasureThresholds(f_settings.measures.optimal_below, f_settings.measures.satisfactory_below)
    require_positive("voyage.gap_eps", f_settings.voyage.gap_eps)
    require_positive("voyage.max_anchor_distance_m", f_settings.voyage.max_anchor_distance_m)
    if f_settings.voyage.stride < 0:
        raise ConfigError("must be >= 0", field="voyage.stride")
    if f_settings.harness.threads < 0:
        raise ConfigError("must be >= 0", field="harness.threads")


def load_settings(f_conf_file=None):
    """
    Read harness settings.

    Args:
        f_conf_file (str): INI path; ~/.config/helmsim.ini when None. A missing
            file yields the built-in defaults.

    Returns:
        Settings: Validated settings with the HELMSIM_THREADS override applied

    Raises:
        ConfigError: On unreadable files, unknown keys or invalid values
    """
    f_conf_file = f_conf_file or default_settings_path()
    f_config = configparser.ConfigParser()
    try:
        f_read = f_config.read(f_conf_file, encoding="UTF-8")
    except configparser.Error as f_error:
        raise ConfigError(f"malformed settings file {f_conf_file}: {f_error}")
    if f_read:
        logger.debug(f"Loaded settings from {f_conf_file}")

    f_unknown = [s for s in f_config.sections() if s not in _SECTIONS]
    if f_unknown:
        raise ConfigError("unknown section", field=f_unknown[0])
    f_settings = Settings(**{name: _read_section(f_config, name, cls) for name, cls in _SECTIONS.items()})

    f_env_threads = os.getenv(THREADS_ENV)
    if f_env_threads:
        try:
            f_threads = int(f_env_threads)
        except ValueError:
            raise ConfigError(f"expected an integer, got {f_env_threads!r}", field=THREADS_ENV)
        f_settings = Settings(f_settings.simulation, f_settings.measures, f_settings.voyage,
                              HarnessSettings(threads=f_threads))
    _validate(f_settings)
    return f_settings


def write_settings(f_conf_file, f_settings=None):
    """Write settings (defaults when None) as an INI template."""
    f_settings = f_settings or Settings()
    f_config = configparser.ConfigParser()
    for f_name in _SECTIONS:
        f_config[f_name] = {k: str(v) for k, v in asdict(getattr(f_settings, f_name)).items()}
    os.makedirs(os.path.dirname(os.path.abspath(f_conf_file)), exist_ok=True)
    with open(f_conf_file, "w", encoding="UTF-8") as f_configfile:
        f_config.write(f_configfile)
    logger.info(f"Settings file written to: {f_conf_file}")
