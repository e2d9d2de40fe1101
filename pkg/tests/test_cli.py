import io
import json
import subprocess
import sys

import pytest

from ehrhartkit import data
from ehrhartkit.cli import main
from ehrhartkit.polytope import Polytope


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [strip_timing(x) for x in obj]
    return obj


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({"ambient_dim": 2, "points": [[0, 0], [1, 0], [0, 1], [1, 1]]}))
    return str(path)


def test_hstar_bundled(capsys):
    code, out = run_json(capsys, "hstar", "theorem1")
    assert code == 0
    assert out["hstar"] == [1, 2, 3, 4, 5, 3, 2, 1]
    assert out["log_concave"] is False and out["unimodal"] is True
    assert "timing" in out


def test_hstar_halfopen_and_point(capsys, tmp_path):
    code, out = run_json(capsys, "hstar", "theorem1", "--method", "halfopen")
    assert out["hstar_halfopen"] == out["hstar"]
    pt = tmp_path / "pt.json"
    pt.write_text('{"ambient_dim": 3, "points": [[1, 2, 3]]}')
    code, out = run_json(capsys, "hstar", str(pt))
    assert code == 0 and out["hstar"] == [1]


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO('{"ambient_dim": 2, "points": [[0,0],[1,0],[0,1],[1,1]]}'))
    code, out = run_json(capsys, "hstar", "-")
    assert code == 0 and out["hstar"] == [1, 1, 0]


@pytest.mark.parametrize("payload", [
    "{not json",
    '{"points": [[0, 0]]}',
    '{"ambient_dim": 2, "points": [[0, 0.5]]}',
    '{"ambient_dim": 2, "points": [[0, 0, 0]]}',
])
def test_malformed_input_exits_64(capsys, tmp_path, payload):
    bad = tmp_path / "bad.json"
    bad.write_text(payload)
    code, _ = run(capsys, "hstar", str(bad))
    assert code == 64


def test_missing_file_and_bad_arguments(capsys):
    assert run(capsys, "hstar", "/nonexistent/file.json")[0] == 64
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        main(["search"])  # --seed is required
    assert e.value.code == 64


def test_idp_exit_codes(capsys, tmp_path):
    code, out = run_json(capsys, "idp", "theorem1")
    assert code == 0 and out["idp"] is True and out["checked_k"] == [1, 2, 3, 4, 5]
    reeve = tmp_path / "reeve.json"
    reeve.write_text(json.dumps(Polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)]).to_json()))
    code, out = run_json(capsys, "idp", str(reeve))
    assert code == 2 and out["idp"] is False and "witness" in out
    code, out = run_json(capsys, "idp", "theorem1", "--max-points", "50")
    assert code == 3 and out["idp"] is None
    code, out = run_json(capsys, "idp", "theorem1", "--paranoid", "6")
    assert code == 0 and out["checked_k"] == [1, 2, 3, 4, 5, 6]


def test_points_and_count(capsys, square_file, tmp_path):
    code, out = run_json(capsys, "points", square_file, "-k", "2")
    assert out["count"] == 9 and [1, 1] in out["points"]
    # a lower-dimensional polytope keeps its ambient coordinates
    tri = tmp_path / "tri.json"
    p = Polytope([(2, 0, 0), (0, 2, 0), (0, 0, 2)])
    tri.write_text(json.dumps(p.to_json()))
    code, out = run_json(capsys, "points", str(tri))
    assert sorted(map(tuple, out["points"])) == sorted(p.lattice_points())
    code, out = run_json(capsys, "points", str(tri), "-k", "2")
    expected = sorted(Polytope([(4, 0, 0), (0, 4, 0), (0, 0, 4)]).lattice_points())
    assert sorted(map(tuple, out["points"])) == expected
    code, out = run_json(capsys, "count", square_file, "--upto", "4")
    assert out["counts"] == {"1": 4, "2": 9, "3": 16, "4": 25}


def test_arc_polytope_and_equiv(capsys, tmp_path):
    code, out = run_json(capsys, "arc-polytope", "figure1")
    assert code == 0 and out["ambient_dim"] == 14 and len(out["points"]) == 15
    arc = tmp_path / "arc.json"
    arc.write_text(json.dumps(out))
    code, out = run_json(capsys, "equiv", "theorem2", str(arc))
    assert code == 0 and out["equivalent"] is True
    assert len(out["map"]["matrix"]) == 12


def test_equiv_negative(capsys, square_file, tmp_path):
    tri = tmp_path / "tri.json"
    tri.write_text('{"ambient_dim": 2, "points": [[0,0],[2,0],[0,2]]}')
    code, out = run_json(capsys, "equiv", square_file, str(tri))
    assert code == 0 and out["equivalent"] is False and "map" not in out


def test_triangulations(capsys, square_file):
    code, out = run_json(capsys, "triangulations", square_file)
    assert code == 0 and len(out) == 2
    assert all(set(row) == {"simplices", "regular", "unimodular", "flag"} for row in out)


def test_triangulations_too_many_points(capsys, tmp_path):
    # 6 lattice points in the plane exceed d + 3 = 5
    tri = tmp_path / "tri.json"
    tri.write_text('{"ambient_dim": 2, "points": [[0,0],[2,0],[0,2]]}')
    code, _ = run(capsys, "triangulations", str(tri))
    assert code == 64


def test_threads_do_not_change_output(capsys):
    a = strip_timing(run_json(capsys, "--threads", "1", "hstar", "theorem1")[1])
    b = strip_timing(run_json(capsys, "--threads", "4", "hstar", "theorem1")[1])
    assert a == b
    a = strip_timing(run_json(capsys, "--threads", "1", "idp", "theorem1")[1])
    b = strip_timing(run_json(capsys, "--threads", "3", "idp", "theorem1")[1])
    assert a == b


def test_threads_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EHRHART_THREADS", "2")
    assert run(capsys, "count", "theorem1", "-k", "2")[0] == 0


def test_verify_json(capsys):
    code, out = run_json(capsys, "verify", "theorem1", "--json")
    assert code == 0
    claims = out["results"]["theorem1"]
    assert len(claims) == 5 and all(c["status"] == "PASS" for c in claims)


def test_search_command(capsys, tmp_path):
    code, out = run_json(capsys, "search", "--seed", "4", "--steps", "0", "--start", "theorem1",
                         "--out", str(tmp_path / "res"))
    assert code == 0 and out["best"]["score"] == "1/9" and out["best"]["idp"] == "verified"
    assert (tmp_path / "res" / "candidates.jsonl").exists()
    assert (tmp_path / "res" / "runlog.jsonl").exists()


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ehrhartkit", "hstar", "-"],
        input=json.dumps(data.theorem1().to_json()), capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["hstar"] == [1, 2, 3, 4, 5, 3, 2, 1]
