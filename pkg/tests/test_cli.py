import csv
import io
import math


from quatloops import cli


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_reports_catalog(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == cli.EXIT_FAIL
    assert "product chain e_ie_j . bar(e_ie_j) with printed signs equals common matrix" in out
    assert "FAIL" in out and "PASS" in out


def test_verify_exit_codes_follow_report():
    buf = io.StringIO()
    assert cli.cmd_verify([("a", True, ""), ("b", True, "")], buf) == cli.EXIT_OK
    assert cli.cmd_verify([("a", True, ""), ("b", False, "dev 1")], buf) == cli.EXIT_FAIL
    assert "1/2 identities hold" in buf.getvalue()


def test_loop_run_rows_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["loop", "run", "--loop", "L19", "--axis", "e2e4", "--jmax", "3.75", "--seed", "42", "--sets", "4"]
    assert cli.main(args + ["-o", str(a)]) == 0
    assert cli.main(args + ["-o", str(b), "--workers", "2"]) == 0
    data = a.read_bytes()
    assert data == b.read_bytes()
    assert b"\r" not in data
    rows = list(csv.reader(io.StringIO(data.decode())))
    assert tuple(rows[0]) == cli.CSV_HEADER
    body = rows[1:]
    assert len(body) == 16 * 8 * 4 * len(cli.KINDS)
    assert {r[5] for r in body} == set(cli.KINDS)
    keys = [(r[0], int(r[1]), float(r[3]), int(r[4]), r[5]) for r in body]
    assert keys == sorted(keys)


def test_loop_run_axis_choices(tmp_path):
    for axis in ("e1e4", "e2e4"):
        assert cli.main(["loop", "run", "--loop", "L21", "--axis", axis, "--jmax", "0.25",
                         "-o", str(tmp_path / f"{axis}.csv")]) == 0
    assert cli.main(["loop", "run", "--loop", "L19", "--axis", "e1e4", "-o", str(tmp_path / "x.csv")]) == 2


def test_loop_run_usage_errors(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    assert cli.main(["loop", "run", "--loop", "L99", "-o", out]) == 2
    assert cli.main(["loop", "run", "--jmin", "2", "--jmax", "1", "-o", out]) == 2
    assert cli.main(["loop", "run", "--sets", "0", "-o", out]) == 2
    assert cli.main(["loop", "run", "-o", str(tmp_path / "missing" / "x.csv")]) == 2
    assert cli.main(["loop", "frobnicate"]) == 2
    assert cli.main(["qft", "nosuch"]) == 2


def test_loop_svg(tmp_path):
    out = tmp_path / "l.csv"
    assert cli.main(["loop", "run", "--loop", "L20", "--jmax", "1", "-o", str(out), "--svg"]) == 0
    svg = out.with_suffix(".svg").read_text()
    assert 'width="800" height="600"' in svg
    assert svg.count("<polyline") == 3
    for colour in ("red", "green", "blue"):
        assert f'stroke="{colour}"' in svg


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nloop = L4p\nj_max = 0.5\nnsets = 2\nverbatim = yes\n")
    out = tmp_path / "c.csv"
    assert cli.main(["loop", "run", "--config", str(cfg), "--sets", "1", "-o", str(out)]) == 0
    rows = list(csv.reader(out.open()))[1:]
    assert {r[0] for r in rows} == {"L4p"}
    assert {r[4] for r in rows} == {"0"}
    assert len(rows) == 3 * 6 * 1 * len(cli.KINDS)
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert cli.main(["loop", "run", "--config", str(bad)]) == 2


def test_verbatim_schedule_changes_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["loop", "run", "--loop", "L19", "--jmax", "0.5", "-o", str(a)]) == 0
    assert cli.main(["loop", "run", "--loop", "L19", "--jmax", "0.5", "--verbatim-steps", "-o", str(b)]) == 0
    assert a.read_bytes() != b.read_bytes()


def test_loop_show_and_list(capsys):
    code, out, _ = run(["loop", "list"], capsys)
    assert code == 0 and out.count("\n") == 10
    code, out, _ = run(["loop", "show", "L19"], capsys)
    assert code == 0 and out.startswith("name L19")
    assert cli.main(["loop", "show", "L0"]) == 2


def test_qft_delta(capsys):
    code, out, _ = run(["qft", "delta", "--axes", "i", "j"], capsys)
    assert code == 0
    vals = dict(line.split()[:2] for line in out.splitlines())
    assert float(vals["commuting_residual"]) <= 1e-10
    assert float(vals["noncommuting_gap"]) >= 0.1
    assert cli.main(["qft", "delta", "--axes", "i", "q"]) == 2


def test_qft_hysteresis(tmp_path):
    out = tmp_path / "h.csv"
    assert cli.main(["qft", "hysteresis", "--n", "256", "-o", str(out), "--svg"]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["ell", "f23", "f32"] and len(rows) == 257
    first, last = rows[1], rows[-1]
    assert abs(float(first[1]) - float(last[1])) <= 1e-9 and abs(float(first[2]) - float(last[2])) <= 1e-9
    assert out.with_suffix(".svg").exists()


def test_qft_other_demos(tmp_path, capsys):
    code, out, _ = run(["qft", "stft", "--n", "128", "-o", str(tmp_path / "s.csv")], capsys)
    assert code == 0 and float(out.split()[-1]) <= 1e-10
    assert cli.main(["qft", "sinsurface", "--n", "5", "-o", str(tmp_path / "ss.csv")]) == 0
    assert len((tmp_path / "ss.csv").read_text().splitlines()) == 26
    code, out, _ = run(["qft", "polar-volume", "--samples", "1000000", "--seed", "7"], capsys)
    est = float(out.split()[1])
    assert code == 0 and abs(est - math.pi ** 2 / 2) <= 0.01 * math.pi ** 2 / 2


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 1e-300, 2.5):
        assert float(cli.fmt(v)) == v
