import csv
import io
import json
from pathlib import Path

import pytest

from seasirs.analysis.verify import Outcome, VerdictReport
from seasirs.api.client import Client
from seasirs.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, main
from seasirs.exceptions import MatrixOverflowError

TESTDATA = Path(__file__).parent / "testdata"
PSTAR = str(TESTDATA / "scenario-pstar.json")
SUBCRITICAL = str(TESTDATA / "scenario-subcritical.json")
SEASONAL = str(TESTDATA / "scenario-seasonal.json")


def test_no_command(capsys):
    assert main([]) == EXIT_USAGE
    assert "a command is required" in capsys.readouterr().err


def test_missing_config_option(capsys):
    assert main(["r0"]) == EXIT_USAGE
    assert "--config" in capsys.readouterr().err


def test_r0(capsys):
    assert main(["r0", "--config", PSTAR]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "supercritical"
    assert data["r0_closed_form"] == pytest.approx(1.66061, abs=1e-5)
    assert data["meta"]["seed"] == 7


def test_r0_seed_option(capsys):
    assert main(["r0", "--config", PSTAR, "--seed", "12"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["meta"]["seed"] == 12


def test_simulate_csv(capsys):
    assert main(["simulate", "--config", PSTAR, "--t-end", "1", "--stride", "0.25"]) == EXIT_OK
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["t", "S", "Ia", "Is", "R", "season"]
    assert [row[0] for row in rows[1:]] == ["0.0", "0.25", "0.5", "0.75", "1.0"]


def test_simulate_text(capsys):
    argv = ["simulate", "--config", PSTAR, "--t-end", "1", "--format", "text"]
    assert main(argv) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["columns"] == ["S", "I_a", "I_s"]


def test_simulate_needs_initial_point(capsys):
    assert main(["simulate", "--config", SEASONAL, "--t-end", "1"]) == EXIT_USAGE
    assert "initial point" in capsys.readouterr().err


def test_output_file(tmp_path, capsys):
    target = tmp_path / "equilibria.json"
    assert main(["equilibria", "--config", PSTAR, "--output", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    data = json.loads(target.read_text())
    assert [r["kind"] for r in data] == ["E0", "E1"]


def test_sweep(capsys):
    argv = ["sweep", "--config", SUBCRITICAL, "--axis", "beta2", "--grid", "0.002,0.01"]
    assert main(argv) == EXIT_OK
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["beta2", "rho", "R0", "verdict"]
    assert [row[3] for row in rows[1:]] == ["subcritical", "supercritical"]


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--config", PSTAR, "--axis", "omega"],
        ["sweep", "--config", PSTAR, "--axis", "mu", "--grid", "a,b"],
        ["verify", "no-such-check", "--config", PSTAR],
        ["r0", "--config", PSTAR, "--format", "xml"],
        ["simulate", "--config", PSTAR],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("seasirs: error:")


def test_missing_config_file(tmp_path, capsys):
    assert main(["r0", "--config", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert "seasirs: error:" in capsys.readouterr().err


def test_invalid_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"params": {"d": 0.02}}')
    assert main(["r0", "--config", str(path)]) == EXIT_USAGE
    assert "Missing parameter field" in capsys.readouterr().err


def test_verify_confirmed(capsys):
    argv = ["verify", "invariance,comparison", "--config", SUBCRITICAL, "--samples", "2"]
    assert main(argv) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert [r["theorem_id"] for r in data] == ["invariance", "comparison"]
    assert all(r["outcome"] == "confirmed" for r in data)


@pytest.mark.parametrize("samples", ["0", "-1"])
def test_verify_needs_samples(samples, capsys):
    argv = ["verify", "invariance", "--config", SEASONAL, "--samples", samples]
    assert main(argv) == EXIT_USAGE
    assert "sample_count must be a positive integer" in capsys.readouterr().err


def test_verify_violated(monkeypatch, capsys):
    def violated(self, ids=None, sample_count=None, seed=None):
        witness = {"params": self.config.params.to_dict(), "p0": {}, "t": 1.0}
        return [VerdictReport("comparison", {}, Outcome.VIOLATED, {}, witness=witness)]

    monkeypatch.setattr(Client, "verify", violated)
    assert main(["verify", "--config", PSTAR]) == EXIT_VIOLATED
    assert json.loads(capsys.readouterr().out)[0]["witness"]["t"] == 1.0


def test_numerical_failure(monkeypatch, capsys):
    def overflow(self, **kwargs):
        raise MatrixOverflowError("matrix exponential overflow")

    monkeypatch.setattr(Client, "r0", overflow)
    assert main(["r0", "--config", PSTAR]) == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err
