import pytest

from helmsim.errors import ConfigError
from helmsim.settings import THREADS_ENV, Settings, load_settings, write_settings

from .conftest import REPO_ROOT


@pytest.fixture(autouse=True)
def clear_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)


def _ini(tmp_path, text):
    path = tmp_path / "helmsim.ini"
    path.write_text(text, encoding="UTF-8")
    return str(path)


def test_missing_file_gives_defaults(tmp_path):
    settings = load_settings(str(tmp_path / "absent.ini"))
    assert settings == Settings()
    assert settings.simulation.steps == 120
    assert settings.measures.thresholds.optimal_below == 1.5
    assert settings.voyage.gap_eps == 3.0


def test_ini_overrides(tmp_path):
    path = _ini(tmp_path, "[simulation]\nsteps = 60\n\n[harness]\nthreads = 3\n")
    settings = load_settings(path)
    assert settings.simulation.steps == 60
    assert settings.simulation.dt == 1.0
    assert settings.harness.threads == 3


@pytest.mark.parametrize("text, field", [
    ("[simulation]\nstep = 60\n", "simulation.step"),
    ("[plots]\nwidth = 3\n", "plots"),
    ("[simulation]\nsteps = sixty\n", "simulation.steps"),
    ("[simulation]\ndt = 0\n", "simulation.dt"),
    ("[measures]\noptimal_below = 5\n", None),
    ("[voyage]\nstride = -1\n", "voyage.stride"),
])
def test_invalid_settings(tmp_path, text, field):
    with pytest.raises(ConfigError) as f_err:
        load_settings(_ini(tmp_path, text))
    if field:
        assert f_err.value.field == field


def test_threads_from_environment(tmp_path, monkeypatch):
    path = _ini(tmp_path, "[harness]\nthreads = 3\n")
    monkeypatch.setenv(THREADS_ENV, "7")
    assert load_settings(path).harness.threads == 7


def test_bad_threads_in_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError, match=THREADS_ENV):
        load_settings(str(tmp_path / "absent.ini"))
    monkeypatch.setenv(THREADS_ENV, "-2")
    with pytest.raises(ConfigError):
        load_settings(str(tmp_path / "absent.ini"))


def test_written_template_loads_back(tmp_path):
    path = str(tmp_path / "nested" / "helmsim.ini")
    write_settings(path)
    assert load_settings(path) == Settings()


def test_shipped_settings_are_the_defaults():
    assert load_settings(str(REPO_ROOT / "config" / "helmsim.ini")) == Settings()
