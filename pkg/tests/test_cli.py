import json

import pytest

from helmsim.cli import EXIT_INPUT, EXIT_OK, main

from .conftest import CONFIG_PATH, REPO_ROOT


def _validate(settings, voyage, weather, out, *extra):
    return main(["--settings", settings, "--quiet", "validate", str(voyage), "--weather", str(weather),
                 "--config", str(CONFIG_PATH), "--out", str(out), *extra])


def _report(out):
    return json.loads((out / "report.json").read_text(encoding="UTF-8"))


@pytest.fixture(scope="module")
def clean_run(synthetic_voyage, tmp_path_factory):
    out = tmp_path_factory.mktemp("clean_run")
    voyage, weather = synthetic_voyage
    code = _validate(str(out / "absent.ini"), voyage, weather, out, "--threads", "1")
    return code, out


def test_simulator_voyage_replays_optimally(clean_run):
    code, out = clean_run
    assert code == EXIT_OK
    report = _report(out)
    counts = report["aggregate"]["counts"]
    assert counts["total"] == 5
    assert counts["optimal"] == 5
    assert counts["failed"] == 0
    assert report["aggregate"]["cvdm_max_pct"] < 0.1
    assert report["windows"] == 5
    assert (out / "wind_check.csv").is_file()
    assert (out / "plots" / "voyage_synthetic_0004" / "manifest.json").is_file()


def test_heading_bias_degrades_every_segment(clean_run, biased_voyage, no_settings, tmp_path):
    voyage, weather = biased_voyage
    assert _validate(no_settings, voyage, weather, tmp_path, "--threads", "1", "--no-plots") == EXIT_OK
    report = _report(tmp_path)
    assert report["aggregate"]["counts"]["optimal"] == 0
    assert report["aggregate"]["cvdm_mean_pct"] > _report(clean_run[1])["aggregate"]["cvdm_mean_pct"]
    assert not (tmp_path / "plots").exists()


def test_serial_and_parallel_reports_match(synthetic_voyage, no_settings, tmp_path):
    voyage, weather = synthetic_voyage
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    assert _validate(no_settings, voyage, weather, serial, "--threads", "1", "--no-plots") == EXIT_OK
    assert _validate(no_settings, voyage, weather, parallel, "--threads", "2", "--no-plots") == EXIT_OK
    assert (serial / "report.json").read_bytes() == (parallel / "report.json").read_bytes()


def test_threads_from_environment(synthetic_voyage, no_settings, tmp_path, monkeypatch):
    monkeypatch.setenv("HELMSIM_THREADS", "2")
    voyage, weather = synthetic_voyage
    assert _validate(no_settings, voyage, weather, tmp_path, "--no-plots", "--steps", "300") == EXIT_OK
    assert _report(tmp_path)["aggregate"]["counts"]["total"] == 2


def test_preset_runs_are_reproducible(no_settings, tmp_path):
    outputs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.csv"
        metrics = tmp_path / f"{name}.json"
        assert main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH),
                     "--preset", "turn-starboard-35", "--out", str(path), "--metrics", str(metrics)]) == EXIT_OK
        outputs.append((path.read_bytes(), metrics.read_bytes()))
    assert outputs[0] == outputs[1]
    assert len(outputs[0][0].decode("UTF-8").splitlines()) == 902


def test_simulate_from_control_schedule(no_settings, tmp_path):
    path = tmp_path / "zigzag.csv"
    assert main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH),
                 "--controls", str(REPO_ROOT / "config" / "controls_zigzag.csv"),
                 "--initial-speed-kn", "6", "--steps", "60", "--out", str(path)]) == EXIT_OK
    assert len(path.read_text(encoding="UTF-8").splitlines()) == 62


def test_compare_with_itself(no_settings, tmp_path, capsys):
    path = tmp_path / "run.csv"
    main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH), "--preset", "turn-port-35",
          "--steps", "120", "--out", str(path)])
    capsys.readouterr()
    assert main(["--settings", no_settings, "compare", str(path), str(path)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["category"] == "optimal"
    assert report["cvdm_pct"] == 0.0
    assert report["mmd_m"] == 0.0


def test_compare_rejects_mismatched_lengths(no_settings, tmp_path):
    short, long_ = tmp_path / "short.csv", tmp_path / "long.csv"
    for path, steps in ((short, "60"), (long_, "120")):
        main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH), "--preset", "turn-port-35",
              "--steps", steps, "--out", str(path)])
    assert main(["--settings", no_settings, "compare", str(short), str(long_)]) == EXIT_INPUT


def test_missing_config_is_an_input_error(synthetic_voyage, no_settings, tmp_path):
    voyage, weather = synthetic_voyage
    assert main(["--settings", no_settings, "--quiet", "validate", str(voyage), "--weather", str(weather),
                 "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == EXIT_INPUT


def test_empty_glob_is_an_input_error(synthetic_voyage, no_settings, tmp_path):
    _, weather = synthetic_voyage
    assert _validate(no_settings, tmp_path / "nothing_*.csv", weather, tmp_path) == EXIT_INPUT


def test_unknown_preset(no_settings, tmp_path):
    assert main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH), "--preset", "figure-eight",
                 "--out", str(tmp_path / "x.csv")]) == EXIT_INPUT


def test_bad_settings_file(tmp_path):
    settings = tmp_path / "helmsim.ini"
    settings.write_text("[harness]\nworkers = 2\n", encoding="UTF-8")
    assert main(["--settings", str(settings), "simulate", "--config", str(CONFIG_PATH),
                 "--preset", "turn-port-35", "--out", str(tmp_path / "x.csv")]) == EXIT_INPUT


def _short_preset(tmp_path):
    presets = tmp_path / "presets.yml"
    presets.write_text("presets:\n  half-step:\n    rpm: 106\n    rudder_deg: 20\n    speed_kn: 6\n"
                       "    steps: 40\n    dt: 0.5\n", encoding="UTF-8")
    return presets


def test_preset_step_size_is_used(no_settings, tmp_path):
    out = tmp_path / "half.csv"
    assert main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH), "--presets",
                 str(_short_preset(tmp_path)), "--preset", "half-step", "--out", str(out)]) == EXIT_OK
    rows = out.read_text(encoding="UTF-8").splitlines()
    assert len(rows) == 42
    assert rows[2].split(",")[0] == "0.5"
    assert rows[-1].split(",")[0] == "20"


def test_dt_flag_overrides_preset(no_settings, tmp_path):
    out = tmp_path / "full.csv"
    assert main(["--settings", no_settings, "simulate", "--config", str(CONFIG_PATH), "--presets",
                 str(_short_preset(tmp_path)), "--preset", "half-step", "--dt", "1", "--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="UTF-8").splitlines()[-1].split(",")[0] == "40"
