import json

from hardybloch.cli import main
from hardybloch.verify import REGISTRY


def test_every_module_has_checks():
    assert {m for m, _, _ in REGISTRY} == {"core", "exprlang", "quad", "ops", "criteria", "cli"}


def test_default_verify_passes(capsys):
    code = main(["verify"])
    out, err = capsys.readouterr()
    assert code == 0, err
    rep = json.loads(out)
    assert rep["results"]["passed"] is True
    assert len(rep["results"]["checks"]) == len(REGISTRY)
    assert "FAIL" not in err


def test_corrupted_tolerance_fails(capsys):
    code = main(["verify", "--set", "quad.rel_tol=1"])
    _, err = capsys.readouterr()
    assert code == 1
    assert "FAIL" in err


def test_filter_runs_subset(capsys):
    code = main(["verify", "--filter", "exprlang"])
    out, _ = capsys.readouterr()
    assert code == 0
    checks = json.loads(out)["results"]["checks"]
    assert checks and {c["module"] for c in checks} == {"exprlang"}


def test_unknown_filter_is_config_error(capsys):
    assert main(["verify", "--filter", "nothing"]) == 2
