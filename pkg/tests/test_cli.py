"""End-to-end command line runs: formats, determinism, exit codes."""

import re

import pytest

from lambda_holonomy.cli import main


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_spectrum_reference_point(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "grid_n = 1\n")
    rc, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "theta,phi,omega,delta,lambda1,lambda2,lambda3,gamma"
    row = lines[1].split(",")
    assert row[4] == "0.0000000000000000e+00"
    assert row[5] == "1.0000000000000000e+00"
    assert row[6] == "-9.0000000000000000e+00"
    assert row[7] == "3.2175055439664219e-01"


def test_spectrum_decoupled_point_has_no_negative_zero(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "omega = 0\ndelta = 1\ngrid_n = 1\n")
    rc, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert rc == 0
    row = out.splitlines()[1].split(",")
    assert row[5] == "0.0000000000000000e+00"
    assert row[6] == "-2.0000000000000000e+00"


def test_footer_carries_config_hash(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "grid_n = 3\n")
    rc, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert rc == 0
    footer = [l for l in out.splitlines() if l.startswith("#")]
    assert any(re.fullmatch(r"# config_hash = [0-9a-f]{12}", l) for l in footer)
    assert "# config grid_n = 3" in footer


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "loop = phi-circle\n")
    rc, _, err = run_cli(capsys, "spectrum", "--config", cfg)
    assert rc == 2
    assert "accepted keys" in err


def test_unknown_variant_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "variant = bogus\n")
    rc, _, err = run_cli(capsys, "holonomy", "--config", cfg, "--steps", "100")
    assert rc == 2
    assert "unknown connection variant" in err


def test_connection_reports_the_fd_defect(tmp_path, capsys):
    rc, out, _ = run_cli(capsys, "connection")
    assert rc == 0
    header = out.splitlines()[0].split(",")
    assert "fd_defect" in header
    value = float(out.splitlines()[1].split(",")[header.index("fd_defect")])
    assert value < 1e-9


def test_curvature_grid_with_plaquette_column(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "grid_n = 4\nvariant = du-sign\nfd_step = 0.01\n")
    rc, out, _ = run_cli(capsys, "curvature", "--config", cfg)
    assert rc == 0
    lines = out.splitlines()
    header = lines[0].split(",")
    assert "plaquette_defect" in header
    assert "frobenius_norm" in header
    data = [l for l in lines[1:] if not l.startswith("#")]
    assert len(data) == 16
    col = header.index("plaquette_defect")
    assert all(float(l.split(",")[col]) < 0.1 for l in data)


def test_holonomy_single_row_and_tolerance_gate(tmp_path, capsys):
    rc, out, _ = run_cli(capsys, "holonomy", "--steps", "400")
    assert rc == 0
    header = out.splitlines()[0].split(",")
    assert "richardson_error" in header
    rc2, _, err = run_cli(capsys, "holonomy", "--steps", "400", "--tolerance", "1e-30")
    assert rc2 == 2
    assert "tolerance" in err


def test_sweep_output_is_byte_identical_across_workers(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "delta_over_omega_list = 10, 30\ngrid_n = 8\n")
    a = str(tmp_path / "a.csv")
    b = str(tmp_path / "b.csv")
    rc1, _, _ = run_cli(
        capsys, "sweep", "--config", cfg, "--out", a, "--steps", "400", "--workers", "1"
    )
    rc2, _, _ = run_cli(
        capsys, "sweep", "--config", cfg, "--out", b, "--steps", "400", "--workers", "2"
    )
    assert rc1 == 0 and rc2 == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_footer_reports_slopes(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "delta_over_omega_list = 10, 30, 100\ngrid_n = 8\n")
    rc, out, _ = run_cli(capsys, "sweep", "--config", cfg, "--steps", "400")
    assert rc == 0
    footer = "\n".join(l for l in out.splitlines() if l.startswith("#"))
    assert "slope curvature_max vs sin_gamma" in footer
    assert "slope commutator_max vs sin_gamma" in footer


def test_sweep_rejects_an_empty_ratio_list(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "delta_over_omega_list =\n")
    rc, _, err = run_cli(capsys, "sweep", "--config", cfg)
    assert rc == 2
    assert "empty" in err


def test_evolve_rejects_an_empty_tau_list(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "tau_list =\n")
    rc, _, err = run_cli(capsys, "evolve", "--config", cfg)
    assert rc == 2


def test_evolve_small_case(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "delta = 20\nomega = 1\ntau_list = 40, 80\n")
    rc, out, _ = run_cli(capsys, "evolve", "--config", cfg, "--steps", "2000")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("tau,")
    data = [l for l in lines[1:] if not l.startswith("#")]
    assert len(data) == 2


def test_figures_are_written_next_to_the_table(tmp_path, capsys):
    out = str(tmp_path / "h.csv")
    rc, msg, _ = run_cli(
        capsys, "holonomy", "--steps", "400", "--out", out, "--figures"
    )
    assert rc == 0
    assert (tmp_path / "h_convergence.png").exists()
    assert "wrote" in msg


def test_claims_emits_the_tab_separated_block(capsys):
    rc, out, _ = run_cli(capsys, "claims")
    assert rc == 0
    tsv = [l for l in out.splitlines() if re.fullmatch(
        r"\d+\t(pass|fail)\t[+-]?\d\.\d{16}e[+-]\d{2,3}\t[+-]?\d\.\d{16}e[+-]\d{2,3}", l
    )]
    assert len(tsv) == 9
    assert [int(l.split("\t")[0]) for l in tsv] == list(range(1, 10))
    assert all(l.split("\t")[1] == "pass" for l in tsv)
