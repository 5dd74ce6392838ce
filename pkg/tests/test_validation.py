from pulseforge import cli
from pulseforge.validation import GROUPS, run_all


def test_validate_passes_and_is_deterministic(capsys):
    assert cli.main(["validate"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["validate"]) == 0
    assert capsys.readouterr().out == first
    assert len(first.splitlines()) == len(GROUPS)
    assert all(line.startswith("PASS ") for line in first.splitlines())


def test_coarse_steps_fail_oracle_group(monkeypatch, capsys):
    monkeypatch.setenv("PULSEFORGE_STEPS", "50")
    results = {r.group: r for r in run_all()}
    assert not results["oracle-equivalence"].passed
    assert cli.main(["validate"]) == 1
    assert "FAIL oracle-equivalence" in capsys.readouterr().out
