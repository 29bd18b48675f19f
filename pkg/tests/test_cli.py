from __future__ import annotations

import json
import subprocess
import sys

import pytest

from lcsolve.cli import main
from lcsolve.graph import format_gr, path_graph, read_gr, transform_jagged
from lcsolve.treedec import format_td, path_decomposition, read_td, validate_decomposition

from corpus import DSL_DIR


@pytest.fixture
def p3(tmp_path):
    path = tmp_path / "p3.gr"
    path.write_text(format_gr(path_graph(3)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve(capsys, p3):
    code, out, _ = run(capsys, "solve", "--graph", p3, "--problem", "dominating-set")
    res = json.loads(out)
    assert code == 0 and res["optimum"] == 1
    assert res["witness"] == {"0": 0, "1": 1, "2": 0}
    assert res["width"] == 1 and res["nodes"] > 0


def test_engines_agree(capsys, p3):
    _, a, _ = run(capsys, "solve", "--graph", p3, "--problem", "dominating-set", "--engine", "oracle")
    _, b, _ = run(capsys, "oracle", "--graph", p3, "--problem", "roman-domination")
    assert json.loads(a)["optimum"] == 1 and json.loads(b)["optimum"] == 2


def test_flow_engine(capsys, tmp_path):
    k3 = tmp_path / "k3.gr"
    k3.write_text("p tw 3 3\n1 2\n2 3\n1 3\n")
    code, out, _ = run(capsys, "solve", "--graph", str(k3), "--problem", "k-chromatic-sum",
                       "--params", '{"k": 3}', "--engine", "complete-flow")
    assert code == 0 and json.loads(out)["optimum"] == 6


def test_dsl_td_and_constraints(capsys, p3, tmp_path):
    td = tmp_path / "p3.td"
    td.write_text(format_td(path_decomposition(3), 3))
    code, out, _ = run(capsys, "solve", "--graph", p3, "--dsl", str(DSL_DIR / "roman-domination.lc"),
                       "--td", str(td), "--no-witness")
    res = json.loads(out)
    assert code == 0 and res["optimum"] == 2 and "witness" not in res
    _, out, _ = run(capsys, "solve", "--graph", p3, "--problem", "independent-set",
                    "--constraints", '{"size": {"colors": [1], "in": [1]}}')
    assert json.loads(out)["optimum"] == 1


def test_output_file_and_error_exit(capsys, p3, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "solve", "--graph", p3, "--problem", "k-coloring",
                       "--params", '{"k": 1}', "--fail-on-error", "--output", str(dest))
    assert code == 1 and out == ""
    assert json.loads(dest.read_text())["optimum"] == "ERROR"


def test_validate(capsys, p3, tmp_path):
    good = tmp_path / "good.td"
    good.write_text("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    code, out, _ = run(capsys, "validate", "--graph", p3, "--td", str(good))
    assert code == 0 and out.strip() == "valid width 1"
    bad = tmp_path / "bad.td"
    bad.write_text("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n")
    code, out, _ = run(capsys, "validate", "--graph", p3, "--td", str(bad))
    assert code == 1 and "edge (1, 2)" in out
    code, _, err = run(capsys, "solve", "--graph", p3, "--problem", "dominating-set", "--td", str(bad))
    assert code == 2 and "invalid decomposition" in err


@pytest.mark.parametrize("argv", [
    ["solve", "--graph", "missing.gr", "--problem", "dominating-set"],
    ["solve", "--graph", "{p3}", "--problem", "no-such-problem"],
    ["solve", "--graph", "{p3}", "--problem", "k-coloring"],
    ["solve", "--graph", "{p3}", "--problem", "k-coloring", "--params", "{k: 3}"],
    ["solve", "--graph", "{p3}"],
    ["solve", "--graph", "{p3}", "--problem", "dominating-set", "--constraints", '{"planar": [1]}'],
    ["solve", "--graph", "{p3}", "--problem", "dominating-set", "--engine", "complete-flow"],
    ["solve", "--graph", "{p3}", "--problem", "dominating-set", "--max-width", "0"],
])
def test_input_errors(capsys, p3, argv):
    code, _, err = run(capsys, *[a.replace("{p3}", p3) for a in argv])
    assert code == 2 and err.startswith("error:")


def test_transform(capsys, tmp_path):
    g = path_graph(4)
    src = tmp_path / "g.gr"
    src.write_text(format_gr(g))
    td = tmp_path / "g.td"
    td.write_text(format_td(path_decomposition(4), 4))
    out_gr, out_td = tmp_path / "j.gr", tmp_path / "j.td"
    code, _, _ = run(capsys, "transform", "--graph", str(src), "--kind", "jagged", "--td", str(td),
                     "--output", str(out_gr), "--td-output", str(out_td))
    assert code == 0
    j = read_gr(out_gr)
    assert j.edges == transform_jagged(g)[0].edges
    assert validate_decomposition(j, read_td(out_td)).width <= 2
    code, out, _ = run(capsys, "transform", "--graph", str(src), "--kind", "power", "--p", "2")
    assert code == 0 and out.startswith("p tw 4 5")


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "50,100")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].split()[0] == "n"


def test_module_entry_point(p3):
    proc = subprocess.run([sys.executable, "-m", "lcsolve.cli", "solve", "--graph", p3,
                           "--problem", "dominating-set"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["optimum"] == 1
