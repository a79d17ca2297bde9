"""Tests for the config module."""
import json
import os
import tempfile

import pytest

from orbitlab.config import DEFAULTS, Config
from orbitlab.errors import ConfigError
from orbitlab.models import GridRegion
from orbitlab.potentials import FubiniStudyPotential

CONFIG_DATA = {
    "potential": {"kind": "fubini_study", "n": 2, "lambda": 1.0},
    "region": {"lo": [-2.0, -2.0], "hi": [2.0, 2.0], "counts": [9, 9]},
    "sampler": {"lines": 50, "seed": 7},
    "segment": {"base": [0.0, 0.0], "direction": [1.0, 1.0], "t_range": [-2.0, 2.0], "samples": 41},
    "output": {"out_dir": "results"},
}


@pytest.fixture
def config_file():
    """Create a temporary config file for testing."""
    with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
        json.dump(CONFIG_DATA, f)
    yield f.name
    os.unlink(f.name)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("ORBITLAB_LOG_LEVEL", "ORBITLAB_OUT_DIR", "ORBITLAB_REPORT_ENDPOINT_URL", "ORBITLAB_WORKERS"):
        monkeypatch.delenv(name, raising=False)


def test_load_config(config_file):
    """Test loading configuration from a file."""
    config = Config(config_file)

    assert config.potential() == FubiniStudyPotential(2)
    assert config.region() == GridRegion.box(2.0, 2)
    assert config.out_dir == "results"
    assert config.seed == 7
    assert config.validate() == []


def test_defaults_fill_missing_sections(config_file):
    config = Config(config_file)
    # sampler.m was not given, sampler.lines was
    assert config.section("sampler") == {"lines": 50, "m": 21, "seed": 7}
    assert config.section("optimizer") == DEFAULTS["optimizer"]
    assert config.section("su2")["resolution"] == [24, 24, 48]


def test_missing_file():
    with pytest.raises(ConfigError) as e:
        Config("/nonexistent/orbitlab.json")
    assert e.value.exit_code == 2


def test_invalid_json():
    with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
        f.write("{not json")
    try:
        with pytest.raises(ConfigError):
            Config(f.name)
    finally:
        os.unlink(f.name)


def test_unknown_key_rejected():
    config = Config.from_dict({**CONFIG_DATA, "jql": "project = TEST"})
    errors = config.validate()
    assert len(errors) == 1
    assert "jql" in errors[0]


def test_missing_potential_rejected():
    config = Config.from_dict({"region": CONFIG_DATA["region"]})
    assert any("potential" in error for error in config.validate())


def test_bad_potential_reported_with_path():
    config = Config.from_dict({**CONFIG_DATA, "potential": {"kind": "fubini_study", "n": 0}})
    errors = config.validate()
    assert errors
    assert all(error.startswith("potential") for error in errors)


def test_dimension_mismatch():
    region = {"lo": [-1.0] * 3, "hi": [1.0] * 3, "counts": [3] * 3}
    config = Config.from_dict({**CONFIG_DATA, "region": region, "segment": None})
    assert config.validate() == ["region: dimension 3 does not match potential dimension 2"]


def test_segment_checks():
    segment = {"base": [0.0], "direction": [0.0, 0.0], "t_range": [1.0, -1.0]}
    config = Config.from_dict({**CONFIG_DATA, "segment": segment})
    errors = config.validate()
    assert "segment/base: expected 2 entries, got 1" in errors
    assert "segment/direction: must be nonzero" in errors
    assert "segment/t_range: needs t_min < t_max" in errors


def test_su2_and_boundary_checks():
    data = {
        **CONFIG_DATA,
        "su2": {"t_range": [1.0, 1.0], "direction": [0.0, 0.0, 0.0]},
        "boundary": {"radii": [4.0, 2.0]},
    }
    errors = Config.from_dict(data).validate()
    assert "su2/t_range: needs t_min < t_max" in errors
    assert "su2/direction: must be nonzero" in errors
    assert "boundary/radii: must be increasing" in errors


def test_ensure_valid_lists_every_problem():
    config = Config.from_dict({**CONFIG_DATA, "workers": 0, "sampler": {"lines": 0}})
    with pytest.raises(ConfigError) as e:
        config.ensure_valid()
    assert len(e.value.details["errors"]) == 2


def test_environment_variables(monkeypatch):
    monkeypatch.setenv("ORBITLAB_LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("ORBITLAB_OUT_DIR", "env-out")
    monkeypatch.setenv("ORBITLAB_WORKERS", "4")
    monkeypatch.setenv("ORBITLAB_REPORT_ENDPOINT_URL", "https://reports.example.com/ingest")

    config = Config.from_dict({k: v for k, v in CONFIG_DATA.items() if k != "output"})
    assert config.log_level == "DEBUG"
    assert config.out_dir == "env-out"
    assert config.workers == 4
    assert config.report_endpoint_url == "https://reports.example.com/ingest"


def test_file_overrides_environment(monkeypatch, config_file):
    monkeypatch.setenv("ORBITLAB_OUT_DIR", "env-out")
    assert Config(config_file).out_dir == "results"


def test_bad_workers_environment(monkeypatch):
    monkeypatch.setenv("ORBITLAB_WORKERS", "many")
    errors = Config.from_dict(CONFIG_DATA).validate()
    assert errors == ["ORBITLAB_WORKERS: expected an integer, got 'many'"]


def test_digest_is_stable(config_file):
    assert Config(config_file).digest() == Config(config_file).digest()
    assert len(Config(config_file).digest()) == 64


def test_digest_ignores_runtime_keys():
    base = Config.from_dict(CONFIG_DATA)
    runtime = Config.from_dict({**CONFIG_DATA, "workers": 8, "log_level": "DEBUG", "output": {"out_dir": "x"}})
    assert base.digest() == runtime.digest()


def test_digest_tracks_analysis_settings():
    base = Config.from_dict(CONFIG_DATA)
    changed = Config.from_dict({**CONFIG_DATA, "thresholds": {"richardson": True}})
    assert base.digest() != changed.digest()


def test_set_seed():
    config = Config.from_dict(CONFIG_DATA)
    before = config.digest()
    config.set_seed(11)
    assert config.seed == 11
    assert config.raw["sampler"]["seed"] == 11
    assert config.digest() != before
    assert config.validate() == []


def test_example_config_is_valid():
    path = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "example-config.json")
    assert Config(path).validate() == []
