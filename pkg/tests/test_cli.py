import csv
import json

import pytest

from gsnn_enum.architect import architecture_from_json, enumerate_architectures, sample_instance, find
from gsnn_enum.cli import instance_to_json, main
from gsnn_enum.morphisms import MorphismGraph
from gsnn_enum.presets import group_from_spec


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


@pytest.mark.parametrize("name,count", [("C6", 6), ("D6", 14), ("{e}", 1)])
def test_enumerate_files(tmp_path, capsys, name, count):
    code, _ = run(["enumerate", "--group", name, "--out", str(tmp_path)], capsys)
    assert code == 0
    files = sorted(tmp_path.glob("arch_*.json"))
    assert len(files) == count
    G = group_from_spec(name)
    for f in files:
        data = json.loads(f.read_text())
        assert data["schema"] == 1
        assert architecture_from_json(data, G).name == data["name"]
    rows = list(csv.DictReader((tmp_path / "summary.csv").open()))
    assert len(rows) == count and set(rows[0]) == {"name", "H_order", "K_order", "type", "hidden"}


def test_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        run(["graph", "--group", "D6", "--out", str(d)], capsys)
        run(["enumerate", "--group", "D6", "--out", str(d)], capsys)
        outs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert outs[0] == outs[1]


def test_table_rows(capsys):
    code, out = run(["table", "--groups", "C2^3,Q8"], capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert "| C2^3 | 8 | 8/16 | 7/35 |" in lines[2]
    assert "| Q8 | 8 | 6/6 | 7/7 |" in lines[3]


def test_table_empty(capsys):
    code, out = run(["table", "--groups", ""], capsys)
    assert code == 0 and len(out.out.splitlines()) == 2


def test_table_partial_failure(capsys, caplog):
    code, out = run(["table", "--groups", "C2,bogus"], capsys)
    assert code == 1
    assert "| C2 |" in out.out and "bogus" in caplog.text


def test_graph(tmp_path, capsys):
    code, out = run(["graph", "--group", "C6", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert out.out.count("color=red") == 2
    assert len(list(tmp_path.glob("cohomology_*.dot"))) == 6
    g = MorphismGraph.from_json(json.loads((tmp_path / "morphisms.json").read_text()))
    assert len(g.nodes) == 6


def test_verify_pass(capsys):
    code, out = run(["verify", "--group", "C6", "--trials", "100"], capsys)
    assert code == 0
    doc = json.loads(out.out)
    assert doc["schema"] == 1 and all(r["pass"] and r["max_gap"] == 0 for r in doc["reports"])


def test_verify_zero_trials(capsys, caplog):
    code, out = run(["verify", "--group", "C6", "--trials", "0"], capsys)
    assert code == 0 and "vacuously" in caplog.text


def test_verify_corrupted_fixture(tmp_path, capsys):
    G = group_from_spec("C6")
    arch = find(enumerate_architectures(G), "1.1")
    f = sample_instance(arch, unit_normalize=False)
    data = instance_to_json("1.1", f)
    data["c"] = [0] * 6
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = run(["verify", "--group", "C6", "--instance", str(path)], capsys)
    assert code == 1
    assert json.loads(out.out)["reports"][0]["pass"] is False
    data = instance_to_json("1.1", f)
    path.write_text(json.dumps(data))
    assert main(["verify", "--group", "C6", "--instance", str(path)]) == 0


def test_describe(capsys):
    code, out = run(["describe", "--group", "D6"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["subgroups"] == 16 and doc["pair_classes"] == 22
    code, out = run(["describe", "--group", "D6", "--arch", "4.2"], capsys)
    assert code == 0 and json.loads(out.out)["name"] == "4.2"


def test_group_file_and_float_mode(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"kind": "dihedral-perm", "n": 4}))
    code, out = run(["enumerate", "--group-file", str(p), "--mode", "float"], capsys)
    assert code == 0 and len(out.out.splitlines()) == 11


@pytest.mark.parametrize(
    "argv",
    [["enumerate", "--group", "nope"], ["enumerate"], ["enumerate", "--group", "C6", "--eps", "-1"],
     ["enumerate", "--group", "D6", "--max-order", "5"], ["describe", "--group", "C6", "--arch", "9.9"]],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
