"""End-to-end tests for the orbitlab command line."""
import json
import os

import pytest

from orbitlab import __version__
from orbitlab.cli import main, parse_args
from orbitlab.laboratory import PROFILE_HEADER
from orbitlab.models import UniquenessResult


def fast_config(potential, n, **overrides):
    data = {
        "potential": potential,
        "region": {"lo": [-1.0] * n, "hi": [1.0] * n, "counts": [5] * n},
        "sampler": {"lines": 12, "m": 11, "seed": 3},
        "optimizer": {"starts": 3, "grid_refinements": 2},
        "boundary": {"radii": [2, 4, 8, 16], "samples_per_sphere": 16},
        "su2": {"points": 9, "resolution": [8, 8, 16], "t_range": [-1.0, 1.0]},
    }
    data.update(overrides)
    return data


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("ORBITLAB_LOG_LEVEL", "ORBITLAB_OUT_DIR", "ORBITLAB_REPORT_ENDPOINT_URL", "ORBITLAB_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def run(tmp_path):
    """Write a config, run one command, and return (exit code, out dir)."""
    def _run(command, data, *extra, out="out"):
        config_path = tmp_path / "orbitlab.json"
        config_path.write_text(json.dumps(data))
        out_dir = tmp_path / out
        code = main([command, "-c", str(config_path), "-o", str(out_dir), "-q", *extra])
        return code, out_dir
    return _run


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def test_parse_args():
    args = parse_args(["analyze", "--seed", "4", "-v"])
    assert args.command == "analyze"
    assert args.config == "orbitlab.json"
    assert args.seed == 4
    assert args.verbose and not args.quiet


def test_parse_args_rejects_quiet_and_verbose():
    with pytest.raises(SystemExit):
        parse_args(["analyze", "-q", "-v"])


@pytest.mark.parametrize("potential,n,ricci,log_vol", [
    ({"kind": "flat", "n": 1}, 1, "Zero", "Affine"),
    ({"kind": "separable_cosh", "n": 2}, 2, "NegativeDefinite", "StrictlyConvex"),
    ({"kind": "fubini_study", "n": 2}, 2, "PositiveDefinite", "StrictlyConcave"),
])
def test_analyze(run, potential, n, ricci, log_vol):
    code, out_dir = run("analyze", fast_config(potential, n))
    assert code == 0

    report = read_json(out_dir / "analyze.json")
    assert report["command"] == "analyze"
    assert report["ricci"]["verdict"] == ricci
    assert report["convexity"]["logVol"]["verdict"] == log_vol
    assert report["expected_log_vol_verdict"] == log_vol
    assert report["consistency"] is True
    assert set(report["convexity"]) == {"logVol", "Vol", "negLogVol", "invVol"}


def test_report_embeds_version_and_digest(run):
    code, out_dir = run("analyze", fast_config({"kind": "flat", "n": 1}, 1))
    assert code == 0
    report = read_json(out_dir / "analyze.json")
    assert report["orbitlab_version"] == __version__
    assert len(report["config_digest"]) == 64


def test_analyze_is_deterministic(run):
    data = fast_config({"kind": "fubini_study", "n": 2}, 2)
    run("analyze", data, out="first")
    _, second = run("analyze", data, out="second")
    first = second.parent / "first"
    assert (first / "analyze.json").read_bytes() == (second / "analyze.json").read_bytes()


def test_seed_override_changes_digest(run):
    data = fast_config({"kind": "flat", "n": 1}, 1)
    _, plain = run("analyze", data, out="plain")
    _, seeded = run("analyze", data, "--seed", "99", out="seeded")
    assert read_json(plain / "analyze.json")["config_digest"] != read_json(seeded / "analyze.json")["config_digest"]
    assert read_json(seeded / "analyze.json")["convexity"]["logVol"]["seed"] == 99


def test_invalid_config_exit_code(run, capsys):
    code, out_dir = run("analyze", fast_config({"kind": "fubini_study", "n": 0}, 1))
    assert code == 2
    error = json.loads(capsys.readouterr().out)
    assert error["error"] == "config_error"
    assert error["details"]["errors"]
    assert not os.path.exists(out_dir / "analyze.json")


def test_missing_config_exit_code(tmp_path, capsys):
    code = main(["analyze", "-c", str(tmp_path / "missing.json"), "-q"])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["error"] == "config_error"


def test_critical_fubini_study(run):
    code, out_dir = run("critical", fast_config({"kind": "fubini_study", "n": 2}, 2))
    assert code == 0

    report = read_json(out_dir / "critical.json")
    assert report["verdict"] == "critical_orbit"
    assert report["result"]["status"] == "maximum"
    assert max(abs(x) for x in report["result"]["x_star"]) < 1e-7
    assert report["moment_map"] == pytest.approx([1 / 3, 1 / 3], abs=1e-7)
    assert report["uniqueness"]["unique"] is True
    assert report["boundary_decay"]["decays_to_zero"] is True
    assert report["grid_check"]["distance_to_x_star"] < 1e-3


def test_critical_separable_cosh(run):
    code, out_dir = run("critical", fast_config({"kind": "separable_cosh", "n": 2}, 2))
    assert code == 0
    report = read_json(out_dir / "critical.json")
    assert report["verdict"] == "no_interior_maximum"
    assert report["ricci_verdict"] == "NegativeDefinite"
    assert report["grid_check"] is None
    assert report["boundary_decay"]["decays_to_zero"] is False


def test_critical_not_unique_exits_4(run, monkeypatch, capsys):
    def spread_out(potential, starts, **kwargs):
        return UniquenessResult(unique=False, spread=1.0, results=[])

    monkeypatch.setattr("orbitlab.laboratory.multistart_uniqueness", spread_out)
    code, out_dir = run("critical", fast_config({"kind": "fubini_study", "n": 2}, 2))
    assert code == 4
    assert json.loads(capsys.readouterr().out)["error"] == "not_converged"
    # the partial report is still written
    assert read_json(out_dir / "critical.json")["uniqueness"]["unique"] is False


def test_profile_writes_csv(run):
    segment = {"base": [0.0, 0.0], "direction": [1.0, 1.0], "t_range": [-2.0, 2.0], "samples": 41,
               "functional": "negLogVol"}
    code, out_dir = run("profile", fast_config({"kind": "fubini_study", "n": 2}, 2, segment=segment))
    assert code == 0

    text = (out_dir / "profile.csv").read_bytes().decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "t,negLogVol,second_difference"
    assert "\r" not in text
    assert text.endswith("\n")
    assert len(lines) == 43
    # endpoints have no second difference
    assert lines[1].endswith(",")
    assert read_json(out_dir / "profile.json")["report"]["verdict"] == "StrictlyConvex"


def test_profile_needs_segment(run):
    code, _ = run("profile", fast_config({"kind": "flat", "n": 1}, 1))
    assert code == 2


def test_su2_profile(run):
    code, out_dir = run("su2", fast_config({"kind": "flat", "n": 1}, 1))
    assert code == 0

    lines = (out_dir / "su2.csv").read_text().splitlines()
    assert lines[0] == ",".join(PROFILE_HEADER)
    assert lines[0] == "t,vol_J,vol,defect,neg_log_volJ_second_diff,omega_norm,density_rel_stddev"
    assert len(lines) == 10
    summary = read_json(out_dir / "su2.json")
    assert summary["argmax_t"] == 0.0
    assert summary["convexity_verdict"] == "StrictlyConvex"
    assert summary["quadrature_resolution"] == [8, 8, 16]


def test_su2_coverage(run):
    su2 = {"points": 9, "resolution": [8, 8, 16], "t_range": [-1.0, 1.0],
           "coverage": {"directions": [[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]], "translates": 1}}
    code, out_dir = run("su2", fast_config({"kind": "flat", "n": 1}, 1, su2=su2))
    assert code == 0
    coverage = read_json(out_dir / "su2.json")["coverage"]
    assert coverage["geodesics"] == 4
    assert coverage["coverage"] == 1.0


def test_su2_resolution_too_small(run, capsys):
    su2 = {"points": 9, "resolution": [3, 8, 16]}
    code, _ = run("su2", fast_config({"kind": "flat", "n": 1}, 1, su2=su2))
    assert code == 2
    assert json.loads(capsys.readouterr().out)["error"] == "resolution_too_small"


def test_lassalle(run):
    su2 = {"points": 9, "resolution": [8, 8, 16], "t_range": [-1.0, 1.0], "integrand": "frobenius_log"}
    code, out_dir = run("lassalle", fast_config({"kind": "flat", "n": 1}, 1, su2=su2))
    assert code == 0
    lines = (out_dir / "lassalle.csv").read_text().splitlines()
    assert lines[0] == "t,F,second_difference"
    assert read_json(out_dir / "lassalle.json")["report"]["verdict"] == "StrictlyConvex"


def test_reports_are_posted_to_collector(run, monkeypatch):
    posted = []

    class Response:
        status_code = 200
        text = ""

    def fake_post(url, data=None, headers=None, timeout=None):
        posted.append((url, json.loads(data)))
        return Response()

    monkeypatch.setattr("orbitlab.logger.requests.post", fake_post)
    data = fast_config({"kind": "flat", "n": 1}, 1, output={"report_endpoint_url": "https://collector.example.com/r"})
    code, _ = run("analyze", data)
    assert code == 0
    assert len(posted) == 1
    url, payload = posted[0]
    assert url == "https://collector.example.com/r"
    assert payload["command"] == "analyze"
    assert payload["report"]["ricci"]["verdict"] == "Zero"


def test_collector_failure_does_not_fail_the_run(run, monkeypatch):
    import requests

    def failing_post(*args, **kwargs):
        raise requests.ConnectionError("collector unreachable")

    monkeypatch.setattr("orbitlab.logger.requests.post", failing_post)
    data = fast_config({"kind": "flat", "n": 1}, 1, output={"report_endpoint_url": "https://collector.example.com/r"})
    code, out_dir = run("analyze", data)
    assert code == 0
    assert os.path.exists(out_dir / "analyze.json")
