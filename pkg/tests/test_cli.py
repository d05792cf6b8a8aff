import io
import json

import pytest

from treebraid.cli import build_parser, run
from treebraid.tree import path_tree


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def path_file(tmp_path):
    p = tmp_path / "path.json"
    p.write_text(json.dumps(path_tree(8).to_document()))
    return str(p)


def test_betti_tmin():
    code, out, _ = call("betti", "--tree", "tmin", "--n", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["betti"] == [1, 24, 6, 0, 0]


def test_betti_with_oracle():
    code, out, _ = call("betti", "--n", "2", "--oracle", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["betti"] == doc["oracle"] == [1, 4, 0] and doc["agree"]


def test_betti_path(path_file):
    code, out, _ = call("betti", "--tree", path_file, "--n", "2")
    assert code == 0 and out.strip() == "betti 1 0 0"


def test_betti_lists_critical_cells():
    code, out, _ = call("betti", "--n", "4", "--dim", "2", "--format", "json")
    assert "{e16, e19, v10, v13}" in json.loads(out)["critical"]


def test_betti_csv():
    code, out, _ = call("betti", "--n", "2", "--format", "csv")
    assert out.splitlines() == ["dim,betti", "0,1", "1,4", "2,0"]


def test_classify():
    assert call("classify", "{v10,v14,e16,e19}")[1] == "Redundant {e14, e16, e19, v10}\n"
    assert call("classify", "{e16,e19,v10,v13}")[1] == "Critical\n"
    assert call("classify", "{*,v1,v2,v3}")[1] == "Critical\n"
    code, out, _ = call("classify", "{e14, e16, e19, v10}", "--format", "json")
    assert json.loads(out) == {"cell": "{e14, e16, e19, v10}", "status": "Collapsible", "partner": "{e16, e19, v10, v14}"}


def test_classify_bad_cell():
    assert call("classify", "{v10,v14")[0] == 2
    assert call("classify", "{e16,v12,v1,v2}")[0] == 2
    assert call("classify", "{v1,v2,v3}", "--n", "4")[0] == 2


def test_cup_table():
    code, out, _ = call("cup-table", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["pairing_rank"] == 6 and doc["radical_dimension"] == 18
    assert len({(i, j) for i, j, _ in doc["products"]}) == 7
    code, dot, _ = call("cup-table", "--n", "4", "--format", "dot")
    assert dot.startswith("graph") and dot.count(" -- ") == 7


def test_cup_table_linear(path_file):
    code, out, _ = call("cup-table", "--tree", path_file, "--n", "4", "--format", "csv")
    assert code == 0 and out == "i,j,product\n"


def test_raag():
    assert json.loads(call("raag", "--n", "4", "--format", "json")[1])["verdict"] == "NotRAAG"
    assert json.loads(call("raag", "--n", "3", "--format", "json")[1])["verdict"] == "IsRAAG"
    code, out, _ = call("raag", "--n", "4", "--witness", "--format", "json")
    w = json.loads(out)["witness"]
    assert w["diagnostic"] is True and len(w["triangle"]) == 3


def test_raag_path(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps(path_tree(12).to_document()))
    doc = json.loads(call("raag", "--tree", str(p), "--n", "9", "--format", "json")[1])
    assert doc == {"verdict": "IsRAAG", "reason": "Linear"}


def test_oracle_command():
    code, out, _ = call("oracle", "--n", "4", "--torsion", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["betti_mod2"] == [1, 24, 6, 0, 0]
    assert doc["torsion"] == [[], [], [], [], []]
    assert json.loads(call("oracle", "--n", "2", "--format", "json")[1])["betti_mod2"] == [1, 4, 0]


def test_oracle_bound():
    code, _, err = call("oracle", "--n", "4", "--max-cells", "1000")
    assert code == 4 and "exceeds" in err


def test_input_errors(tmp_path):
    assert call("betti", "--n", "6")[0] == 2
    assert call("betti", "--n", "0")[0] == 2
    assert call("betti")[0] == 2
    assert call("betti", "--tree", str(tmp_path / "missing.json"), "--n", "2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"root": "a", "children": {"a": ["b", "c"]}}')
    assert call("betti", "--tree", str(bad), "--n", "2")[0] == 2
    assert call("raag", "--n", "4", "--format", "dot")[0] == 2


def test_subdivide_flag(tmp_path):
    p = tmp_path / "y.json"
    p.write_text(json.dumps({"root": "r", "children": {"r": ["c"], "c": ["a", "b"]}}))
    assert call("betti", "--tree", str(p), "--n", "3")[0] == 2
    code, out, _ = call("betti", "--tree", str(p), "--n", "3", "--subdivide", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["vertices"] == 7 and doc["betti"] == [1, 3, 0, 0]


def test_json_round_trip():
    for argv in (("betti", "--n", "3"), ("raag", "--n", "5"), ("classify", "{e19, v10, v13, *}")):
        out = call(*argv, "--format", "json")[1]
        assert json.dumps(json.loads(out), sort_keys=True) + "\n" == out


def test_parser_has_all_commands():
    sub = build_parser()._subparsers._group_actions[0].choices
    assert set(sub) == {"betti", "classify", "cup-table", "raag", "oracle"}
