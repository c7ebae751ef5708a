import json

import numpy as np
import pytest

from greencore.cli import build_parser, main
from greencore.matrices import save_matrix


@pytest.fixture()
def shift3_files(tmp_path):
    a = np.eye(3)
    b = np.zeros((3, 3))
    b[2, 2] = 1.0
    c = np.zeros((3, 3))
    c[0, 1] = 1.0
    c[1, 2] = 1.0
    pa, pb, pc = (tmp_path / n for n in ("a.json", "b.json", "c.csv"))
    save_matrix(a, pa)
    save_matrix(b, pb)
    save_matrix(c, pc)
    return str(pa), str(pb), str(pc)


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_monoid_invert_json(capsys):
    rc = main(["invert", "--universe", "zn:8", "--kind", "moore-penrose",
               "-a", "3", "--format", "json"])
    assert rc == 0
    body = _json_out(capsys)
    assert body["status"] == "exists"
    assert body["witness"] == 3


def test_monoid_invert_negative_exit_zero(capsys):
    rc = main(["invert", "--universe", "zn:8", "--kind", "group", "-a", "2"])
    assert rc == 0
    assert "not_exists" in capsys.readouterr().out


def test_monoid_index_table(capsys):
    rc = main(["index", "--universe", "zn:8", "-a", "1", "--b", "1",
               "--c", "2", "--kmax", "10"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "3..10" in out or "3, 4" in out or "members" in out
    assert "exists" in out


def test_monoid_index_json(capsys):
    rc = main(["index", "--universe", "zn:8", "-a", "1", "--b", "1",
               "--c", "2", "--kmax", "10", "--format", "json"])
    assert rc == 0
    body = _json_out(capsys)
    assert body["members"] == list(range(3, 11))
    assert body["inverse"] == 0


def test_matrix_invert(shift3_files, capsys):
    pa, pb, pc = shift3_files
    rc = main(["invert", "--a-file", pa, "--b-file", pb, "--c-file", pc,
               "--format", "json"])
    assert rc == 0
    body = _json_out(capsys)
    assert body["k"] == 1
    x = np.asarray(body["inverse"])
    assert np.allclose(x[..., 0], [[0, 0, 0], [1, 0, 0], [0, 0, 0]])


def test_matrix_invert_not_invertible_exit_zero(shift3_files, capsys):
    pa, pb, pc = shift3_files
    rc = main(["invert", "--a-file", pa, "--b-file", pb, "--c-file", pc,
               "--k", "0"])
    assert rc == 0
    assert "not_invertible" in capsys.readouterr().out


def test_matrix_index(shift3_files, capsys):
    pa, pb, pc = shift3_files
    rc = main(["index", "--a-file", pa, "--b-file", pb, "--c-file", pc,
               "--kmax", "3", "--format", "json"])
    assert rc == 0
    body = _json_out(capsys)
    assert body["members"] == [1]
    assert body["rank_table"][0] == [0, 1, 2, 1]


def test_matrix_solve(shift3_files, capsys):
    pa, pb, pc = shift3_files
    rc = main(["solve", "--a-file", pa, "--b-file", pb, "--c-file", pc,
               "--rhs", "1,0,0", "--format", "json"])
    assert rc == 0
    body = _json_out(capsys)
    x = np.asarray(body["solution"])
    assert np.allclose(x[:, 0], [0, 1, 0])


def test_out_file_writing(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc = main(["invert", "--universe", "zn:8", "--kind", "moore-penrose",
               "-a", "3", "--format", "json", "--out", str(target)])
    assert rc == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["witness"] == 3


def test_reproduce_byte_stable(tmp_path):
    f1, f2 = tmp_path / "one.json", tmp_path / "two.json"
    for f in (f1, f2):
        rc = main(["reproduce", "--case", "z8", "--format", "json",
                   "--out", str(f)])
        assert rc == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_check_command(capsys):
    rc = main(["check", "--universes", "zn:6"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out


def test_bad_inputs_exit_two(tmp_path, capsys):
    assert main(["invert", "--universe", "zn:8", "--kind", "bc",
                 "-a", "3"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["invert", "--universe", "nope:1", "-a", "0"]) == 2
    capsys.readouterr()
    missing = str(tmp_path / "missing.json")
    assert main(["invert", "--a-file", missing]) == 2
    capsys.readouterr()


def test_argparse_rejects_unknown_verb():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_parser_inventory():
    parser = build_parser()
    text = parser.format_help()
    for verb in ("invert", "index", "solve", "check", "reproduce", "serve"):
        assert verb in text
