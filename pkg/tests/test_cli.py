import subprocess
import sys


from microqreg.cli import main


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "paper_815nm" in out and "shift_echo_default" in out


def test_describe(capsys):
    assert main(["describe", "trap_characterization"]) == 0
    assert "wavelength" in capsys.readouterr().out


def test_describe_unknown(capsys):
    assert main(["describe", "nope"]) != 0
    assert "allowed" in capsys.readouterr().err


def test_run_pass(tmp_path, capsys):
    assert main(["run", "paper_815nm", "--out", str(tmp_path)]) == 0
    assert "[PASS]" in capsys.readouterr().out
    assert (tmp_path / "summary.yaml").is_file()


def test_run_fail_exit_code(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text(
        "kind: trap_characterization\n"
        "laser: {wavelength: 815.0e-9, power: 2.0e-3, waist: 3.7e-6}\n"
        "expect:\n  depth_uK: {target: 10.0, rel_tol: 0.01}\n"
    )
    assert main(["run", str(path), "--out", str(tmp_path / "out")]) == 1


def test_run_invalid_scenario(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("kind: loading_detection\ngrid: {rows: 2, cols: 2}\nloading: {kind: poisson}\n")
    assert main(["run", str(path)]) != 0
    assert "seed" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "microqreg", "run", "rydberg_feasibility", "--out", str(tmp_path), "--seed", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "technical_error" in proc.stdout
