import json

import pytest

from stacksort.cli import PipelineConfig, main, parse_groups, parse_permutation, run_bound


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_simulate_figure_one(capsys):
    code, out = run(capsys, "simulate", "4231", "121121232333")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 14 and lines[-1] == "sorted"
    assert lines[12].endswith("out:[1,2,3,4]")


def test_simulate_trivial_and_illegal(capsys):
    assert run(capsys, "simulate", "1", "12", "--k", "1")[0] == 0
    code, out = run(capsys, "simulate", "12", "21")
    assert code == 1 and "ILLEGAL" in out and "step 1" in out
    assert run(capsys, "simulate", "21", "123123")[0] == 1


def test_parsers():
    assert parse_permutation("4231") == (4, 2, 3, 1)
    assert parse_permutation("10,2,1") == (10, 2, 1)
    assert parse_groups("13,2") == [[0, 2], [1]]


def test_kn_table(capsys, tmp_path):
    code, out = run(capsys, "kn-table", "6", "--json", str(tmp_path / "kn.json"))
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()[1:]] == "0 0 1 2 2 2 2".split()
    rows = json.loads((tmp_path / "kn.json").read_text())
    assert rows[0] == {"n": 0, "k_n": 0, "status": "ok"}
    code, out = run(capsys, "kn-table", "5", "--max-states", "3")
    assert code == 3 and "budget_exhausted" in out


def test_perms(capsys):
    assert run(capsys, "perms", "4", "2", "--count")[1].strip() == "24"
    assert run(capsys, "perms", "3", "1")[1].split() == ["123", "132", "213", "231", "321"]


def test_relations_commands(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out = run(capsys, "relations", "discover", "--max-len", "6", "--out", str(path))
    assert code == 0 and json.loads(out)["count"] == 5
    code, out = run(capsys, "relations", "verify", str(path))
    assert code == 0 and json.loads(out)["valid"]
    doc = json.loads(path.read_text())
    doc["rules"].append({"from": "12", "to": "21"})
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "relations", "verify", str(path))
    assert code == 1 and json.loads(out)["rule"] == {"from": "12", "to": "21"}


def test_gf_command(capsys):
    code, out = run(capsys, "gf", "--forbidden", "13,1232,1223", "--uniform", "--series", "5")
    rec = json.loads(out)
    assert rec["text"] == "(1) / (1 - 3*x + x^2 + 2*x^4)" and rec["series"] == [1, 3, 8, 21, 53, 132]
    code, out = run(capsys, "gf", "--forbidden", "13,1232,1223", "--substitute", "1,2,1")
    assert json.loads(out)["text"] == "(1) / (1 - 2*x + 2*x^6)"


def test_optimize_command(capsys, tmp_path):
    _, out = run(capsys, "gf", "--forbidden", "13,1232,1223")
    (tmp_path / "gf.json").write_text(out)
    code, out = run(capsys, "optimize", str(tmp_path / "gf.json"))
    rec = json.loads(out)
    assert code == 0 and rec["weights"] == [4, 7, 4]
    assert rec["objective"] == pytest.approx(13.65685, abs=1e-5)


@pytest.mark.parametrize("max_len,expected", [(4, 0.51364), (6, 0.52031)])
def test_bound_uniform(capsys, tmp_path, max_len, expected):
    code, out = run(capsys, "bound", "--max-len", str(max_len), "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["constant"] == pytest.approx(expected, abs=1e-5)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["bound.json", "forbidden.json", "gf.json", "rules.json"]


def test_bound_optimized_reports_both_paths(capsys, tmp_path):
    code, out = run(capsys, "bound", "--max-len", "4", "--weights", "optimized", "--identify", "13,2", "--out", str(tmp_path))
    rep = json.loads(out)
    assert rep["constant_5dp"] == "0.53029"
    assert rep["integer_weights_per_letter"] == [4, 7, 4]
    assert round(rep["integer_constant"], 5) == 0.53028
    assert (tmp_path / "optimum.json").exists()


def test_bound_cached_rules_identical(capsys, tmp_path):
    fresh, cached = tmp_path / "fresh", tmp_path / "cached"
    run(capsys, "bound", "--max-len", "6", "--out", str(fresh))
    run(capsys, "bound", "--rules-file", str(fresh / "rules.json"), "--out", str(cached))
    for name in ("rules.json", "forbidden.json", "gf.json", "bound.json"):
        assert (fresh / name).read_bytes() == (cached / name).read_bytes()
    again = tmp_path / "again"
    run(capsys, "bound", "--max-len", "6", "--out", str(again))
    assert (again / "bound.json").read_bytes() == (fresh / "bound.json").read_bytes()


def test_bound_stage_failure(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"from": "12", "to": "21"}]))
    code, _ = run(capsys, "bound", "--rules-file", str(bad), "--out", str(tmp_path / "o"))
    assert code == 2


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(k=9)
    assert PipelineConfig(k=3).ell == 3


def test_run_bound_api(tmp_path):
    rep = run_bound(PipelineConfig(max_relation_len=4, out_dir=tmp_path))
    assert rep["rule_count"] == 3
