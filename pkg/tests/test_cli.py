import json

import pytest

from crossed_cra import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_spectrum_two_points(capsys):
    code, out, _ = run(capsys, "spectrum", "--grid", "0.55:1.55:2")
    assert code == cli.EXIT_OK
    lines = data_lines(out)
    assert lines[0] == "E,T,R,L,T+R,s_re,s_im,r_re,r_im,edge"
    assert len(lines) == 3
    assert out.startswith("# tool = crossed-cra")
    assert "# params.xi_b = 0.25" in out


def test_default_grid_is_b_band(capsys):
    code, out, _ = run(capsys, "spectrum")
    assert code == 0
    assert "# grid.n_points = 2001" in out
    rows = data_lines(out)[1:]
    assert len(rows) == 2001
    assert rows[0].startswith("0.55000000000000004,0,")


def test_json_output(capsys):
    code, out, _ = run(capsys, "spectrum", "--grid", "0.8:1.0:3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["grid.n_points"] == 3
    assert [r["E"] for r in doc["rows"]] == pytest.approx([0.8, 0.9, 1.0])


def test_file_output_and_svg(tmp_path, capsys):
    out = tmp_path / "spectrum.csv"
    code, stdout, _ = run(capsys, "spectrum", "--grid", "0.6:1.5:11", "--out", str(out), "--svg")
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("#")
    assert (tmp_path / "spectrum.svg").read_text().lstrip().startswith("<?xml")


def test_svg_requires_out(capsys):
    code, _, err = run(capsys, "spectrum", "--svg")
    assert code == cli.EXIT_CONFIG
    assert "--out" in err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[params]\nomega_b = 0.8\nj_a = 0.1\n\n[grid]\ne_min = 0.6\ne_max = 1.0\nn_points = 3\n")
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--j-a", "0.12")
    assert code == 0
    assert "# params.omega_b = 0.80000000000000004" in out
    assert "# params.j_a = 0.12" in out
    assert len(data_lines(out)) == 4


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[params]\nxi_a = fast\n", "run.ini:2"),
        ("[params]\n\ncolour = 1\n", "run.ini:3"),
        ("[nonsense]\na = 1\n", "unknown section"),
        ("[grid]\ne_min = 0.6\n", "missing"),
        ("[params]\nxi_a = -1\n", "positive"),
    ],
)
def test_config_errors(tmp_path, capsys, text, fragment):
    cfg = tmp_path / "run.ini"
    cfg.write_text(text)
    code, _, err = run(capsys, "spectrum", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG
    assert fragment in err


@pytest.mark.parametrize("grid", ["1:0:3", "0:1", "0:1:1", "a:b:c"])
def test_bad_grid(capsys, grid):
    code, _, _ = run(capsys, "spectrum", "--grid", grid)
    assert code == cli.EXIT_CONFIG


def test_missing_config_file(capsys):
    code, _, _ = run(capsys, "spectrum", "--config", "/nonexistent/run.ini")
    assert code == cli.EXIT_CONFIG


def test_unwritable_output(capsys):
    code, _, _ = run(capsys, "spectrum", "--grid", "0.6:0.7:2", "--out", "/nonexistent/dir/x.csv")
    assert code == cli.EXIT_IO


def test_overlaps_needs_resonance(capsys):
    code, _, err = run(capsys, "overlaps")
    assert code == cli.EXIT_NOT_RESONANT
    assert "omega_b = 0.85" in err


def test_overlaps_columns(capsys):
    code, out, _ = run(capsys, "overlaps", "--omega-b", "0.85", "--grid", "0.6:1.4:5")
    assert code == 0
    assert data_lines(out)[0].startswith("E,T,D,B+,B-")


def test_bound_states_report(capsys):
    code, out, _ = run(capsys, "bound-states")
    rows = [line.split(",") for line in data_lines(out)[1:]]
    assert code == 0
    assert [r[0] for r in rows] == ["lower", "upper"]
    assert float(rows[0][1]) == pytest.approx(0.68795, abs=1e-5)
    assert all(abs(float(r[2])) < 1e-12 for r in rows)
    assert all(float(r[6]) < 1e-8 for r in rows)


def test_bound_states_without_coupling(capsys):
    code, out, _ = run(capsys, "bound-states", "--j-a", "0")
    assert code == 0
    assert "no chain-A bound state" in out
    assert len(data_lines(out)) == 1


def test_oracle_compare_single_point(capsys):
    code, out, err = run(capsys, "oracle-compare", "--grid", "1.05:1.05:1")
    assert code == 0
    assert "PASS" in err
    assert len(data_lines(out)) == 2


def test_oracle_compare_negative_control(capsys):
    code, _, err = run(capsys, "oracle-compare", "--points", "20", "--negate-zeta")
    assert code == cli.EXIT_TOLERANCE
    assert "FAIL" in err


def test_oracle_energies_skip_edges(params):
    cfg = cli.RunConfig(params=params, grid=(0.55, 1.55, 2001), oracle_points=200)
    energies = cli.oracle_energies(cfg)
    assert len(energies) == 200
    assert all(abs(e - x) > 1e-6 for e in energies for x in (0.55, 0.7, 1.3, 1.55))


def test_wavepacket(capsys):
    code, out, err = run(capsys, "wavepacket")
    assert code == 0
    assert "PASS" in err
    assert [line.split(",")[0] for line in data_lines(out)[1:]] == ["T", "R", "L"]


def test_version(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--version"])
    assert "0.1.0" in capsys.readouterr().out
