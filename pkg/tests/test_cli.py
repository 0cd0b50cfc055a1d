import csv
import io
import json
import math
from pathlib import Path

import pytest

from tribeam.cli import main, parse_angle, parse_phi_grid

CIRCUITS = Path(__file__).resolve().parents[1] / "circuits"
DA2 = str(CIRCUITS / "paper_fig1.circuit")
DA1 = str(CIRCUITS / "paper_fig1_da1.circuit")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_da1(capsys):
    code, out, _ = run(capsys, "simulate", "--spec", DA1, "--n", "1000", "--seed", "1")
    assert code == 0
    rep = json.loads(out)
    probs = rep["analytic"]["probabilities"]
    assert probs == pytest.approx({"l": 0.25, "m": 0.25, "p": 0.5}, abs=1e-12)
    assert rep["analytic"]["renorm_beta"] == 1.0
    assert rep["audits"]["completeness_deviation"] <= 1e-12
    assert "causality" not in rep["audits"]
    assert sum(rep["monte_carlo"]["counts"].values()) == 1000


def test_simulate_da2(capsys):
    code, out, _ = run(capsys, "simulate", "--spec", DA2, "--n", "1000")
    rep = json.loads(out)
    assert code == 0
    assert rep["analytic"]["probabilities"] == pytest.approx({"k": 2 / 3, "p": 1 / 3}, abs=1e-12)
    assert rep["analytic"]["renorm_beta"] == pytest.approx(1.5, abs=1e-12)
    assert rep["audits"]["causality"]["total"] == pytest.approx(1.5)
    assert rep["audits"]["causality"]["violates_conservation"] is True
    assert rep["audits"]["completeness_deviation"] > 0.4
    assert rep["versions"]["generator"].startswith("philox")


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--spec", DA2, "--n", "300", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [r["outcome"] for r in rows] == ["k", "p"]


def test_invalid_spec_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.circuit"
    bad.write_text("source w=1 rate=1\nsplitter BS1 ratio=1.5\n")
    code, out, err = run(capsys, "simulate", "--spec", str(bad))
    assert code == 2 and out == ""
    assert ":2:20:" in err


def test_validation_failure_exit_code(tmp_path, capsys):
    f = tmp_path / "x.circuit"
    f.write_text("preset paper-fig1\ndetector bob arm=a\n")
    code, out, err = run(capsys, "validate", "--spec", str(f))
    assert code == 2 and "consumed" in err
    code, out, _ = run(capsys, "validate", "--spec", DA2)
    assert code == 0 and out == "ok\n"


def test_missing_file(capsys):
    code, _, _ = run(capsys, "simulate", "--spec", "/nonexistent/file")
    assert code == 2


def test_dark_fringe_and_runtime_exit_code(tmp_path, capsys):
    f = tmp_path / "dark.circuit"
    f.write_text("source w=1 rate=1\nsplitter BS1 ratio=0.5\nsplitter BS2 ratio=0.5\nphase a phi=3.141592653589793\ndetector alice placement=DA2\n")
    code, out, _ = run(capsys, "simulate", "--spec", str(f), "--n", "10")
    assert code == 0
    assert json.loads(out)["analytic"]["probabilities"]["p"] == pytest.approx(1.0, abs=1e-12)
    code, _, _ = run(capsys, "doubleslit", "--spec", DA2, "--points", "1")
    assert code == 3


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--spec", DA2, "--phi-grid", "0:0:1", "--n", "1000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["phi", "analytic_bob_rate", "empirical_bob_rate", "stderr"]
    assert float(rows[0]["analytic_bob_rate"]) == pytest.approx(1 / 3, abs=1e-12)

    _, out, _ = run(capsys, "sweep", "--spec", DA2, "--phi-grid", "pi:pi:1", "--n", "100")
    assert float(list(csv.DictReader(io.StringIO(out)))[0]["analytic_bob_rate"]) == pytest.approx(1.0)

    _, out, _ = run(capsys, "sweep", "--spec", DA2, "--phi-grid", "0:2pi:256", "--n", "10")
    phis = [float(r["phi"]) for r in csv.DictReader(io.StringIO(out))]
    assert len(phis) == 256 and phis == sorted(phis)


def test_sweep_requires_da2(capsys):
    code, _, _ = run(capsys, "sweep", "--spec", DA1)
    assert code == 2


def test_signal(capsys):
    code, out, _ = run(capsys, "signal", "--spec", DA2, "--bits", "01", "--n", "10000", "--seed", "3")
    rep = json.loads(out)
    assert code == 0
    assert rep["decoded"] == "01" and rep["bit_error_rate"] == 0.0
    _, out, _ = run(capsys, "signal", "--spec", DA2, "--bits", "0", "--n", "1")
    bound = json.loads(out)["transcript"][0]["decision"]["error_bound"]
    assert bound == pytest.approx(math.exp(-2 / 144), rel=1e-12)


def test_signal_empty_bits(capsys):
    with pytest.raises(SystemExit) as info:
        main(["signal", "--spec", DA2, "--bits", ""])
    assert info.value.code == 2


def test_doubleslit(capsys):
    code, out, _ = run(capsys, "doubleslit", "--spec", DA2, "--points", "1024")
    rep = json.loads(out)
    assert code == 0
    assert rep["integrated_weight"] == pytest.approx(0.5, abs=1e-9)
    assert rep["screen_completeness_deviation"] <= 1e-12
    assert rep["renorm_beta"] == 1.0
    code, out, _ = run(capsys, "doubleslit", "--spec", DA2, "--points", "8", "--format", "csv")
    assert len(out.strip().split("\n")) == 9


def test_byte_identical_reruns(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(["simulate", "--spec", DA2, "--n", "5000", "--seed", "77", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "text,value",
    [("0", 0.0), ("1.5", 1.5), ("pi", math.pi), ("2pi", 2 * math.pi), ("-pi/2", -math.pi / 2), ("0.5*pi", math.pi / 2)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_parse_phi_grid():
    g = parse_phi_grid("0:2pi:5")
    assert g[0] == 0 and g[-1] == pytest.approx(2 * math.pi) and len(g) == 5
