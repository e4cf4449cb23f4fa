from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from cgw import cache as cache_mod
from cgw.cli import emit_plot_data, run
from cgw.growth import GrowthTable


def data_rows(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


def test_growth_csv(capsys):
    assert run(["growth", "--group", "free(2)", "--radius", "3"]) == 0
    out = capsys.readouterr().out
    rows = data_rows(out)
    assert rows[0] == "n,value"
    assert [int(r.split(",")[1]) for r in rows[1:]] == [1, 5, 17, 53]
    assert "# tool: cgw" in out and "# group: free(2)" in out and "# radius: 3" in out


def test_conj_growth_json(capsys):
    assert run(["conj-growth", "--group", "free(2)", "--radius", "3", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["values"][:4] == [1, 5, 13, 25]


def test_reduce_hnn(capsys):
    assert run(["reduce", "--group", "hnn(free(2), a='x', b='y')", "--word", "t^-1*x^2*t"]) == 0
    assert capsys.readouterr().out.strip() == "y^2"


def test_compare_json(tmp_path, capsys):
    table = tmp_path / "xi.csv"
    assert run(["conj-growth", "--group", "free(2)", "--radius", "6", "-o", str(table)]) == 0
    assert run(["compare", "--f", str(table), "--g", "ref:exp(3)", "--equiv"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["relation"] in ("equiv", "preceq", "refuted-within")
    assert d["provenance"]["command"] == "compare"
    assert run(["compare", "--f", "ref:poly(1)", "--g", "ref:poly(2)", "--n", "10"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["relation"] == "preceq" and d["C"] == 1


def test_input_errors_exit_2(capsys):
    assert run(["reduce", "--group", "free(2)", "--word", "x*("]) == 2
    assert "column 3" in capsys.readouterr().err
    assert run(["growth", "--group", "nonsense(3)", "--radius", "2"]) == 2
    assert run(["growth", "--group", "free(2)"]) == 2
    assert run(["growth", "--group", "free(2)", "--radius", "2", "--threads", "0"]) == 2
    assert run(["compare", "--f", "missing.csv", "--g", "ref:poly(2)"]) == 2
    assert run(["prim-growth", "--group", "hnn(free(2), a='x', b='y')", "--radius", "2"]) == 2
    assert run(["bogus"]) == 2


def test_budget_exit_3(capsys):
    assert run(["growth", "--group", "free(2)", "--radius", "30", "--budget", "100"]) == 3
    assert "complete through radius 3" in capsys.readouterr().err


def test_cache_roundtrip(tmp_path, capsys):
    args = ["conj-growth", "--group", "heisenberg", "--radius", "4", "--cache", str(tmp_path)]
    assert run(args) == 0
    first = capsys.readouterr().out
    entries = list(tmp_path.glob("*.json"))
    assert len(entries) == 1
    assert run(args) == 0
    assert capsys.readouterr().out == first
    # corrupt one byte of the payload: the entry is a miss and gets recomputed
    entry = entries[0]
    raw = bytearray(entry.read_bytes())
    i = raw.index(b"heisenberg")
    raw[i] = ord("H")
    entry.write_bytes(bytes(raw))
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert json.loads(entry.read_text())["payload"] == first


def test_cache_version_bump_misses(tmp_path, monkeypatch, capsys):
    args = ["growth", "--group", "free(2)", "--radius", "2", "--cache", str(tmp_path)]
    assert run(args) == 0
    capsys.readouterr()
    monkeypatch.setattr(cache_mod, "__version__", "999.0")
    k_old = cache_mod.cache_key("free(2)", "growth", {"radius": 2})
    k_new = cache_mod.cache_key("free(2)", "growth", {"radius": 2}, version="999.0")
    assert k_old != k_new
    assert run(args) == 0
    assert len(list(tmp_path.glob("*.json"))) == 1


def test_cache_env_variable(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CGW_CACHE", str(tmp_path))
    assert run(["growth", "--group", "free(1)", "--radius", "2"]) == 0
    assert len(list(tmp_path.glob("*.json"))) == 1


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_cache_warns(tmp_path, capsys):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    with pytest.warns(UserWarning):
        assert run(["growth", "--group", "free(1)", "--radius", "2", "--cache", str(d / "sub")]) == 0


def test_cache_path_is_a_file_warns(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.warns(UserWarning):
        assert run(["growth", "--group", "free(1)", "--radius", "2", "--cache", str(blocker)]) == 0
    assert data_rows(capsys.readouterr().out)[1:] == ["0,1", "1,3", "2,5"]


def test_plot_data(tmp_path, capsys):
    plot = tmp_path / "p.dat"
    assert run(["growth", "--group", "free(2)", "--radius", "3", "--plot", str(plot)]) == 0
    text = plot.read_text()
    assert "# group: free(2)" in text
    rows = data_rows(text)
    assert len(rows) == 4
    assert rows[1].split() == ["1", "5", "1.609438"]


def test_plot_data_bracketed_and_empty():
    br = GrowthTable("xi", "hnn", ["x"], [1, None], [1, 3], [1, 4])
    rows = emit_plot_data(br).splitlines()
    assert len(rows) == 2 and len(rows[1].split()) == 4
    assert emit_plot_data(GrowthTable("gamma", "g", [], [], None, None)) == ""


def test_translation_and_hat(capsys):
    assert run(["translation", "--group", "free(2)", "--word", "x*y", "--radius", "4"]) == 0
    out = capsys.readouterr().out
    assert data_rows(out)[1:] == ["1,2,2,2", "2,4,2,2", "3,6,2,2", "4,8,2,2"]
    assert run(["hat-metric", "--group", "direct(free(1), free(1))", "--h1", "0.x", "--h2", "0.x^2",
                "--radius", "4", "--letter-bound", "4"]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_check_sc_and_gen_w(tmp_path, capsys):
    words = tmp_path / "r.txt"
    words.write_text("# relators\nx*y*x*y^-1*x^2*y^2\n")
    assert run(["check-sc", "--group", "free(2)", "--words", str(words), "--eps", "0", "--mu", "1/2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert "C" in d and d["provenance"]["mu"] == "1/2"
    assert run(["gen-w", "--group", "product(cyclic(7), cyclic(7))", "--n", "2", "--plan", "1:3,2:4"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["certificate"]["b_distinct_up_to_inverse"] is False
    assert run(["gen-w", "--group", "product(cyclic(7), cyclic(7))", "--n", "2", "--plan", "a"]) == 2


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=str(Path(__file__).resolve().parents[1] / "src"))
    r = subprocess.run([sys.executable, "-m", "cgw", "reduce", "--group", "free(2)", "--word", "x*x^-1*y"],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0 and r.stdout.strip() == "y"
