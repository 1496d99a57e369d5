import csv
import math
import subprocess
import sys

import pytest

from polariton_optomech.cli import EXIT_CONFIG, EXIT_OK, EXIT_UNSTABLE, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.reader(rows))


def report(text):
    return {k: v for k, v in table(text)[1:]}


def test_point_entangled_two_mode(capsys):
    code, out, _ = run(["point", "--variant", "two_mode", "--nbar", "0.5", "--Gpsi", "1.5"], capsys)
    assert code == EXIT_OK
    rep = report(out)
    assert rep["stable"] == "true"
    assert float(rep["E_N[psi|b]"]) > 0
    assert float(rep["chi[psi|b]"]) < 1
    for key in ("gamma1[psi|b]", "eta_ab[psi|b]", "re_ab[psi|b]", "im_ab[psi|b]", "re_n_a[psi|b]"):
        assert key in rep


def test_point_weak_coupling_below_one_thermal_quantum(capsys):
    # any G_psi in (0, 2 gamma) entangles the pair once n_bar < 1
    code, out, _ = run(["point", "--nbar", "0.5", "--Gpsi", "0.5"], capsys)
    assert code == EXIT_OK
    assert float(report(out)["E_N[psi|b]"]) == pytest.approx(0.0589, abs=1e-3)


def test_point_above_one_thermal_quantum_is_separable(capsys):
    code, out, _ = run(["point", "--nbar", "1.2", "--Gpsi", "1.5"], capsys)
    assert float(report(out)["E_N[psi|b]"]) == 0.0


def test_point_full_chain_without_optomechanics(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("E_L = 2\nG0 = 0\ndelta = 0.3\nf1 = 1\nDelta_L = 1\nnbar = 0.4\n")
    code, out, _ = run(["point", "--variant", "two_mode", "--config", str(cfg)], capsys)
    assert code == EXIT_OK
    rep = report(out)
    for name in ("G_psi", "G_phi", "G_q", "G_theta", "G_pi"):
        assert float(rep[f"wp.{name}"]) == 0.0
    assert float(rep["E_N[psi|b]"]) == 0.0
    assert float(rep["re_n_a[psi|b]"]) == pytest.approx(0.0, abs=1e-14)
    assert float(rep["re_n_b[psi|b]"]) == pytest.approx(0.4, abs=1e-14)


def test_point_full_chain_from_lattice(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text(
        "n_sites = 1000\nspacing_d = 3.9e-7\ndipole_mu = 5e-29\nangle_alpha = 1.5707963267948966\n"
        "omega_a = 2.5e15\nomega_c = 2.5e15\nmode_volume_V = 1e-10\ngamma_si = 1e8\n"
        "E_L = 1\nG0 = 0.05\nDelta_L = 1\n"
    )
    code, out, _ = run(["point", "--variant", "theta_pi", "--config", str(cfg)], capsys)
    assert code == EXIT_OK
    assert float(report(out)["wp.Omega"]) > 0


def test_point_unstable_exit_code(capsys):
    code, out, err = run(["point", "--Gpsi", "2.5"], capsys)
    assert code == EXIT_UNSTABLE
    assert "unstable" in err
    assert report(out)["stable"] == "false"


def test_multistable_drive_exit_code(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("E_L = 3\nG0 = 1\ndelta = 2\nf1 = 0\nDelta_L = 3\n")
    code, _, err = run(["point", "--config", str(cfg)], capsys)
    assert code == EXIT_UNSTABLE
    assert "3 branches" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["point", "--variant", "a1_a2"],
        ["point", "--Gpsi", "1", "--nbar", "0.5", "--msq", "2"],
        ["point", "--config", "/nonexistent.cfg"],
        ["sweep", "custom", "--x", "nbar:0:1"],
        ["sweep", "custom", "--x", "nope:0:1", "--y", "U:0:1"],
    ],
)
def test_config_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_CONFIG
    assert "config error" in err


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("Gpsi = 1\ncolour = 3\n")
    code, _, err = run(["point", "--config", str(cfg)], capsys)
    assert code == EXIT_CONFIG and "colour" in err


def test_sweep_is_byte_identical_and_row_major(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "fig2", "--grid", "6", "--out", str(a)]) == EXIT_OK
    assert main(["sweep", "fig2", "--grid", "6", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rows = table(a.read_text())
    assert rows[0] == ["nbar", "Gpsi", "E_N"]
    body = [[float(x) for x in r] for r in rows[1:]]
    assert len(body) == 36
    assert [r[0] for r in body[:6]] == [0.0] * 6
    assert body[0][1] < body[1][1]
    # at least 12 significant digits
    assert all(len(x.split("e")[0].replace(".", "").lstrip("-")) >= 12 for x in rows[1])


def test_sweep_marks_unstable_points(capsys):
    code, out, _ = run(["sweep", "custom", "--variant", "two_mode", "--x", "nbar:0:1", "--y", "Gpsi:1:3", "--grid", "5"], capsys)
    assert code == EXIT_OK
    rows = table(out)[1:]
    assert len(rows) == 25
    unstable = [r for r in rows if r[2] == "unstable"]
    assert unstable and all(float(r[1]) >= 2.0 for r in unstable)


def test_sweep_fig3_reports_chi(capsys):
    code, out, _ = run(["sweep", "fig3", "--grid", "4"], capsys)
    assert table(out)[0] == ["nbar", "Gpsi", "chi"]


def test_lattice_defaults(capsys):
    code, out, _ = run(["lattice"], capsys)
    assert code == EXIT_OK
    rows = {int(r[0]): (float(r[1]), float(r[2])) for r in table(out)[1:]}
    assert len(rows) == 1000
    assert rows[1][1] == pytest.approx(1.6e8, rel=0.05)
    assert rows[3][1] == pytest.approx(5.3e7, rel=0.05)
    assert rows[2][1] == 0.0


def test_lattice_magic_angle(capsys):
    code, out, _ = run(["lattice", "--angle", str(math.acos(1 / math.sqrt(3)))], capsys)
    J = float([line for line in out.splitlines() if "J_alpha" in line][0].split("=")[1])
    assert abs(J) < 1e-6


def test_lattice_three_sites(capsys, tmp_path):
    cfg = tmp_path / "l.cfg"
    cfg.write_text(
        "n_sites = 3\nspacing_d = 1e-7\ndipole_mu = 1e-29\nangle_alpha = 1.5707963267948966\n"
        "omega_a = 1e15\nomega_c = 1e15\nmode_volume_V = 1e-12\n"
    )
    code, out, _ = run(["lattice", "--config", str(cfg)], capsys)
    rows = table(out)[1:]
    assert [r[0] for r in rows] == ["1", "2", "3"]
    assert float(rows[1][1]) == pytest.approx(1e15, rel=1e-15)


def test_validate_oracles_only(capsys):
    code, out, _ = run(["validate", "--no-stochastic"], capsys)
    assert code == EXIT_OK
    rows = table(out)[1:]
    assert rows and all(r[1] == "pass" for r in rows)


def test_simulate_command(capsys, tmp_path):
    out_file = tmp_path / "s.csv"
    code, _, _ = run(
        ["simulate", "--variant", "two_mode", "--Gpsi", "1", "--ntraj", "100", "--window", "20", "--out", str(out_file)],
        capsys,
    )
    assert code == EXIT_OK
    rows = table(out_file.read_text())
    assert rows[0] == ["row", "col", "estimate", "stderr", "lyapunov", "z"]
    assert len(rows) == 11


def test_simulate_rejects_small_ensemble(capsys):
    code, _, err = run(["simulate", "--Gpsi", "1", "--ntraj", "10"], capsys)
    assert code == EXIT_CONFIG


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polariton_optomech", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
