import json

import pytest

from hmf5.cli import RunConfig, UsageError, main, run


def _json(capsys, argv):
    code = main(argv + ["--output", "json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("command,expected", [
    ("identities", 1),
    ("classify", 0),
    ("resultants", 1),
    ("derivations", 0),
])
def test_exit_codes(capsys, command, expected):
    code, out = _json(capsys, [command, "--trace-bound", "6"])
    assert code == expected
    assert out["command"] == command and out["ok"] == (expected == 0)
    assert set(out) == {"command", "ok", "checks", "data", "seconds"}
    for c in out["checks"]:
        assert set(c) == {"name", "ok", "detail"}


def test_identities_report_text(capsys):
    assert main(["identities"]) == 1
    text = capsys.readouterr().out
    assert "PASS triple bracket as nested brackets: IDENTITY VERIFIED" in text
    assert "FAIL quadratic relation, displayed form" in text
    assert "PASS quadratic relation, anti-diagonal minors" in text


def test_stability_default_and_custom(capsys):
    assert main(["stability"]) == 0
    capsys.readouterr()
    code, out = _json(capsys, ["stability", "--ideal", "chi", "--derivs", "dstar,estar,fstar"])
    assert code == 0 and out["ok"]


def test_usage_errors(capsys):
    assert main(["classify", "--trace-bound", "3"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["stability", "--derivs", "gstar"]) == 2
    assert main(["stability", "--l-constants", "1,2"]) == 2
    assert main(["no-such-command"]) == 2
    with pytest.raises(UsageError):
        RunConfig(trace_bound=2)
    with pytest.raises(UsageError):
        run("nothing", RunConfig())


def test_calibrate_reports_computed_values(capsys, tmp_path):
    code, out = _json(capsys, ["calibrate", "--trace-bound", "6", "--cache-dir", str(tmp_path)])
    assert code == 1
    failed = {c["name"] for c in out["checks"] if not c["ok"]}
    assert failed == {"l1 = 11/sqrt5", "lambda = 484/49"}
    assert out["data"]["lambda"].startswith("1/16")
    assert (tmp_path / "calibration.json").exists()
    cached = json.loads((tmp_path / "calibration.json").read_text())
    assert cached["l1"] == "0/1+14/5*s5" and cached["lambda"] == "1/16"


def test_cache_reuse(capsys, tmp_path):
    code, out = _json(capsys, ["fourier-dump", "--trace-bound", "6", "--cache-dir", str(tmp_path)])
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} >= {"generators.json", "phi2.jsonl", "chi5.jsonl",
                                                   "chi6.jsonl", "chi15.jsonl"}
    code, out = _json(capsys, ["derivations", "--trace-bound", "5", "--cache-dir", str(tmp_path)])
    assert code == 0
    assert out["data"]["generators"].startswith("loaded from")
    # a larger bound than cached forces a rebuild
    code, out = _json(capsys, ["derivations", "--trace-bound", "7", "--cache-dir", str(tmp_path)])
    assert out["data"]["generators"].startswith("built")


def test_cached_calibration_is_verified(capsys, tmp_path):
    main(["calibrate", "--trace-bound", "6", "--cache-dir", str(tmp_path)])
    capsys.readouterr()
    code, out = _json(capsys, ["calibrate", "--trace-bound", "6", "--cache-dir", str(tmp_path)])
    assert "verified cached constants" in out["data"]["calibration"]
    names = [c["name"] for c in out["checks"]]
    assert "chi15^2 = lambda * Klein core" in names
