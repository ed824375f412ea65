import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from freepiston import csvio
from freepiston.cli import main

PAPER_CFG = str(Path(__file__).resolve().parent.parent / "configs" / "paper.cfg")
NS = "{http://www.w3.org/2000/svg}"


def summary(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1
    return dict(item.split("=", 1) for item in out[0].split())


def with_overrides(tmp_path, **values):
    """Copy of configs/paper.cfg with the given keys replaced or added."""
    lines = [line for line in Path(PAPER_CFG).read_text().splitlines()
             if line.split("=")[0].strip() not in values]
    lines += [f"{key} = {value}" for key, value in values.items()]
    path = tmp_path / "run.cfg"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_optimize_paper(tmp_path, capsys):
    out, plot = tmp_path / "trace.csv", tmp_path / "trace.svg"
    assert main(["optimize", "--config", PAPER_CFG, "--lambda", "1", "--out", str(out),
                 "--plot", str(plot)]) == 0
    s = summary(capsys)
    assert s["status"] == "Converged"
    assert "lambda_star" in s and "iterations" in s
    trace = csvio.read_csv(out, csvio.TRACE)
    assert trace[0].lambda_j == 1.0
    assert trace[-1].j_value <= 1e-6
    assert abs(trace[-1].lambda_j - float(s["lambda_star"])) == 0
    root = ET.fromstring(plot.read_bytes())
    assert len(root.findall(f".//{NS}polyline")) == 2


def test_simulate_at_optimum(tmp_path, capsys):
    main(["optimize", "--config", PAPER_CFG])
    lam = summary(capsys)["lambda_star"]
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--config", PAPER_CFG, "--lambda", lam, "--out", str(out),
                 "--plot", str(tmp_path / "traj.svg")]) == 0
    s = summary(capsys)
    assert s["termination"] == "PeakFound"
    rows = csvio.read_csv(out, csvio.TRAJECTORY)
    v = [r.v for r in rows]
    peak = max(range(len(v)), key=v.__getitem__)
    assert 0 < peak < len(v) - 1
    assert abs(v[-1]) <= 1e-9
    assert rows[-1].x == pytest.approx(0.0225, abs=1e-6)


def test_sweep_and_calibrate(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", PAPER_CFG, "--from", "1", "--to", "2", "--points", "11",
                 "--out", str(out), "--plot", str(tmp_path / "sweep.svg")]) == 0
    s = summary(capsys)
    assert s["points"] == "11"
    assert len(csvio.read_csv(out, csvio.SWEEP)) == 11

    report = tmp_path / "report.md"
    assert main(["calibrate", "--config", PAPER_CFG, "--target-lambda", "0.9", "--from",
                 "0.03", "--to", "0.2", "--report", str(report), "--starts", "1,2",
                 "--out", str(tmp_path / "scan.csv")]) == 0
    s = summary(capsys)
    assert s["status"] == "Calibrated"
    assert abs(float(s["lambda_star"]) - 0.9) <= 1e-3
    assert "Calibrated" in report.read_text()


def test_stable_output(capsys):
    args = ["optimize", "--config", PAPER_CFG, "--strategy", "energy"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("overrides, status", [
    (dict(bogus_key=1), None),
    (dict(tol_s=1), "StepUnderflow"),
    (dict(max_iter=0), "MaxIterations"),
    (dict(lambda_min=1.2, lambda_init=1.5), "BoundStuck"),
])
def test_exit_codes_optimize(tmp_path, capsys, overrides, status):
    code = main(["optimize", "--config", with_overrides(tmp_path, **overrides)])
    if status is None:
        assert code == 1
        assert "bogus_key" in capsys.readouterr().err
    else:
        assert code == 3
        assert summary(capsys)["status"] == status


def test_exit_code_numerical_failure(tmp_path, capsys):
    # weak kickback drives the piston into a vanishing guard band
    cfg = with_overrides(tmp_path, **{"lambda": 0.001, "guard_eps_m": 1e-17,
                                      "event_tol_m": 1e-30})
    assert main(["simulate", "--config", cfg]) == 2
    assert "x=" in capsys.readouterr().err


def test_usage_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["optimize"])
    assert info.value.code == 1
    assert main(["optimize", "--config", str(tmp_path / "nope.cfg")]) == 1
    assert main(["calibrate", "--config", PAPER_CFG]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "freepiston", "optimize", "--config", PAPER_CFG,
                           "--max-iter"], capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "freepiston", "sweep", "--config", PAPER_CFG,
                           "--points", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("command=sweep ")
