import json
import subprocess
import sys

import numpy as np
import pytest

from mpmartin import example2
from mpmartin.cli import main
from mpmartin.formats import dumps, num, parse_num


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, out


@pytest.fixture(scope="module")
def ex2_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("ex2")
    assert main(["corpus", "export", "example2", "--param", "J=20", "--output-dir", str(d)]) == 0
    return d


@pytest.fixture(scope="module")
def zline_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("zline")
    assert main(["corpus", "export", "z_line", "--param", "size=30", "--output-dir", str(d)]) == 0
    (d / "f.json").write_text(json.dumps({"values": {str(x): min(-x + 1, x) for x in range(-30, 31)}}))
    return d


def test_number_format():
    assert num(-np.inf) == "-inf" and num(np.inf) == "+inf"
    assert num(1 / 3) == 0.333333333333
    assert num(-0.0) == 0.0
    assert parse_num("-inf") == -np.inf and parse_num(2) == 2.0
    assert dumps({"b": 1, "a": [np.float64(0.5)]}) == '{\n  "a": [\n    0.5\n  ],\n  "b": 1\n}\n'


def test_star_empty_kernel(tmp_path, capsys):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"states": ["a", "b"], "entries": []}))
    code, out = run(["star", p], capsys)
    assert code == 0
    star = json.loads(out)["Astar"]
    assert sorted(map(tuple, star["entries"])) == [("a", "a", 0.0), ("b", "b", 0.0)]


def test_star_positive_loop(tmp_path, capsys):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"states": ["a"], "entries": [["a", "a", 0.5]]}))
    code, out = run(["star", p], capsys)
    assert code == 1
    assert json.loads(out)["cycle"] == ["a"]


def test_martin_on_example2(ex2_dir, capsys):
    code, out = run(["martin", ex2_dir / "kernel.json"], capsys)
    assert code == 0
    data = json.loads(out)
    K = np.array(data["K"], dtype=float)
    assert np.allclose(K, example2(20).inst.K, atol=1e-11)


def test_measures_example2(ex2_dir, capsys):
    code, out = run(["measures", ex2_dir / "kernel.json", ex2_dir / "u.json", "--family", ex2_dir / "family.json"], capsys)
    assert code == 0
    pts = json.loads(out)["points"]
    for name, row in pts.items():
        assert row["mumin"] == row["mumax"]
    assert pts["K[4]"]["mumax"] == -0.25


def test_measures_example1_golden(tmp_path, capsys):
    assert main(["corpus", "export", "example1", "--param", "X=12", "Y=12", "N=8", "--output-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    code, out = run(["measures", tmp_path / "kernel.json", tmp_path / "u.json", "--family", tmp_path / "family.json"], capsys)
    assert code == 0
    pts = json.loads(out)["points"]
    assert pts["b1"]["m_u"] == "-inf" and pts["b1"]["mumin"] == -4.0 and pts["a3"]["mumin"] == -4.0


def test_measures_not_superharmonic(tmp_path, capsys):
    (tmp_path / "k.json").write_text(json.dumps({"states": ["a", "b"], "entries": [["a", "b", 0], ["b", "b", 0]], "basepoint": "a"}))
    (tmp_path / "u.json").write_text(json.dumps({"values": {"a": 0, "b": 2}}))
    code, out = run(["measures", tmp_path / "k.json", tmp_path / "u.json"], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "NotSuperharmonic"


def test_output_is_byte_stable(ex2_dir, tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / ("r%d.json" % k)
        main(["measures", str(ex2_dir / "kernel.json"), str(ex2_dir / "u.json"), "--output", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_represent_command(ex2_dir, tmp_path, capsys):
    mu = {"domain": "points", "density": {"K[%d]" % j: -1.0 / j for j in range(1, 21)}}
    mu["density"]["K[inf]"] = 0.0
    (tmp_path / "mu.json").write_text(json.dumps(mu))
    code, _ = run(["represent", ex2_dir / "kernel.json", ex2_dir / "u.json", tmp_path / "mu.json"], capsys)
    assert code == 0
    mu["density"]["K[inf]"] = "-inf"
    (tmp_path / "mu.json").write_text(json.dumps(mu))
    code, _ = run(["represent", ex2_dir / "kernel.json", ex2_dir / "u.json", tmp_path / "mu.json"], capsys)
    assert code == 1


def test_geodesic_commands(ex2_dir, capsys):
    k, u = ex2_dir / "kernel.json", ex2_dir / "u.json"
    code, out = run(["geodesic", "certify", k, "--path", "inf", "4", "2", "1", "--u", u], capsys)
    assert code == 0 and json.loads(out)["beta"] == 1.0
    code, out = run(["geodesic", "certify", k, "--path", "inf", "4", "2", "1", "--u", u, "--beta", "0.5"], capsys)
    assert code == 1
    code, out = run(["geodesic", "rebase", k, "--path", "4", "2", "--new-base", "4"], capsys)
    assert code == 0 and json.loads(out)["bound_holds"]
    code, out = run(["geodesic", "witness", k, u, "--start", "inf", "--delta", "0.1"], capsys)
    assert code == 0
    cert = json.loads(out)
    assert cert["beta"] <= 0.1 and cert["kind"] == "u_relative"


def test_metric_commands(zline_dir, capsys):
    g = zline_dir / "graph.json"
    code, out = run(["metric", "greatest-nu", g, zline_dir / "f.json", zline_dir / "horofunctions.json"], capsys)
    assert code == 0
    assert json.loads(out)["nu"] == {"h+": 1.0, "h-": 0.0}
    (zline_dir / "nu.json").write_text(json.dumps({"h+": 1.0, "h-": 0.0}))
    code, _ = run(["metric", "represent", g, zline_dir / "f.json", zline_dir / "horofunctions.json", zline_dir / "nu.json"], capsys)
    assert code == 0
    code, out = run(["metric", "rieffel", g, "--path", *range(0, 20), "--eps", "1e-6"], capsys)
    assert code == 0 and json.loads(out)["threshold"] == 0
    code, out = run(["metric", "horolimit", g, "--ray", *range(0, 31), "--window", *range(-3, 4)], capsys)
    assert json.loads(out)["h"]["h"] == [3.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0]
    # on the full truncated line the level sets are cut off, so check an interior window
    code, out = run(["metric", "distance-like", g, zline_dir / "f.json"], capsys)
    assert code == 1
    (zline_dir / "fw.json").write_text(json.dumps({"values": {str(x): min(-x + 1, x) for x in range(-15, 16)}}))
    code, out = run(["metric", "distance-like", g, zline_dir / "fw.json", "--format", "table"], capsys)
    assert code == 0 and "verdict" in out


def test_certify_half_line_ray(tmp_path, capsys):
    assert main(["corpus", "export", "half_line", "--param", "size=10", "--output-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    graph = json.loads((tmp_path / "graph.json").read_text())
    A = {"states": graph["nodes"], "basepoint": "0", "entries": []}
    for a, b, w in graph["edges"]:
        A["entries"] += [[a, b, -w], [b, a, -w]]
    (tmp_path / "k.json").write_text(json.dumps(A))
    code, out = run(["geodesic", "certify", tmp_path / "k.json", "--path", *range(0, 11)], capsys)
    assert code == 0 and json.loads(out)["beta"] == 0.0


def test_module_entry_point(tmp_path):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"states": ["a"], "entries": []}))
    res = subprocess.run([sys.executable, "-m", "mpmartin", "star", str(p), "--format", "table"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "Astar" in res.stdout
