import json

import jsonschema
import pytest

from cyclepack.cli import run
from cyclepack.report import report_schema, verify_report
from cyclepack.generators import rotational_tournament


def test_generate_header(tmp_path):
    out = tmp_path / "t7.og"
    assert run(["generate", "--family", "rotational", "--n", "7", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "og 7 21"


def test_generate_extremal_by_k(tmp_path):
    out = tmp_path / "e.og"
    assert run(["generate", "--family", "extremal_thm1", "--k", "1", "--out", str(out)]) == 0
    assert out.read_text().startswith("og 21 210")


def test_oracle_prints_six(capsys):
    assert run(["oracle", "--family", "extremal_thm1", "--n", "21"]) == 0
    assert capsys.readouterr().out.strip() == "6"


def test_oracle_feasible_exit_codes(capsys):
    assert run(["oracle", "--family", "rotational", "--n", "9", "--mode", "feasible", "--lengths", "3,3,3"]) == 0
    assert run(["oracle", "--family", "transitive", "--n", "6", "--mode", "feasible", "--lengths", "3"]) == 2
    assert run(["oracle", "--family", "rotational", "--n", "9", "--mode", "feasible"]) == 1


def test_pack_verify_round_trip(tmp_path):
    g_path = tmp_path / "r99.og"
    rep_path = tmp_path / "rep.json"
    assert run(["generate", "--family", "rotational", "--n", "99", "--out", str(g_path)]) == 0
    code = run(["pack", "--graph", str(g_path), "--mode", "triangles", "--seed", "1",
                "--report", str(rep_path), "--out", str(tmp_path / "stdout.json")])
    assert code == 0
    data = json.loads(rep_path.read_text())
    jsonschema.validate(data, report_schema())
    assert len(data["uncovered"]) <= 3
    assert run(["verify", str(rep_path), str(g_path)]) == 0


def test_verify_flags_flipped_edge(tmp_path, capsys):
    g_path = tmp_path / "r45.og"
    rep_path = tmp_path / "rep.json"
    run(["generate", "--family", "rotational", "--n", "45", "--out", str(g_path)])
    run(["pack", "--graph", str(g_path), "--report", str(rep_path), "--out", str(tmp_path / "o.json")])
    data = json.loads(rep_path.read_text())
    data["cycles"][2] = data["cycles"][2][::-1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    assert run(["verify", str(bad), str(g_path)]) == 1
    assert "cycle 2" in capsys.readouterr().err


def test_verify_flags_out_of_range(tmp_path):
    g = rotational_tournament(45)
    g_path = tmp_path / "r45.og"
    g_path.write_text(g.to_og())
    rep_path = tmp_path / "rep.json"
    run(["pack", "--graph", str(g_path), "--report", str(rep_path), "--out", str(tmp_path / "o.json")])
    data = json.loads(rep_path.read_text())
    data["cycles"][0][0] = 45
    problems = verify_report(data, g)
    assert any("cycle 0" in p and "outside" in p for p in problems)


@pytest.mark.parametrize("mode, extra", [
    ("k-cycles", ["--k", "4"]),
    ("prescribed", ["--lengths", "3,4,5"]),
    ("long", ["--lengths", "20,25"]),
    ("one-factor", ["--lengths", "45"]),
])
def test_pack_modes_share_fields(tmp_path, mode, extra):
    rep_path = tmp_path / f"{mode}.json"
    code = run(["pack", "--family", "rotational", "--n", "45", "--mode", mode, "--report", str(rep_path),
                "--out", str(tmp_path / "o.json")] + extra)
    assert code == 0
    data = json.loads(rep_path.read_text())
    assert set(data) == set(report_schema()["required"])


def test_pack_extremal_one_factor_unmet(capsys):
    assert run(["pack", "--family", "extremal_thm1", "--n", "21", "--mode", "one-factor",
                "--lengths", ",".join(["3"] * 7), "--format", "tsv"]) == 2
    assert "target unmet" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["pack", "--bogus"],
    ["pack"],
    ["pack", "--family", "rotational", "--n", "9", "--graph", "x.og"],
    ["pack", "--family", "rotational", "--n", "9", "--mode", "prescribed"],
    ["pack", "--family", "rotational", "--n", "10"],
    ["pack", "--family", "rotational", "--n", "9", "--c2", "-1"],
    ["verify", "missing.json", "missing.og"],
    [],
])
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().err


def test_analyze_and_nibble(tmp_path):
    out = tmp_path / "a.json"
    assert run(["analyze", "--family", "rotational", "--n", "99", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["band_ok"] and data["bad_bound_ok"] and data["cyclic_triangles"] == 40425
    out = tmp_path / "n.json"
    assert run(["nibble", "--family", "rotational", "--n", "45", "--greedy", "--seed", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["greedy_uncovered"] == 45 - 3 * data["greedy_matching_size"]


def test_bench(tmp_path):
    out = tmp_path / "b.json"
    assert run(["bench", "--family", "rotational", "--n", "45", "--trials", "3", "--jobs", "2",
                "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["trials"] == 3 and data["success_rate"] == 1.0
    assert [r["seed"] for r in data["runs"]] == [0, 1, 2]
