import io
import json
import subprocess
import sys

import pytest

from sgbraid.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, data_dir):
    code, out, _ = run(capsys, "validate", data_dir / "hopf.sgs")
    assert code == 0 and out.strip() == "valid"
    code, out, _ = run(capsys, "validate", data_dir / "example1-g.gbw", "--json")
    assert code == 0 and json.loads(out)["kind"] == "word"


def test_validate_broken_file(capsys, tmp_path, data_dir):
    bad = tmp_path / "bad.sgs"
    bad.write_text((data_dir / "hopf.sgs").read_text().replace("min 1 a", "min 1 b"))
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and err


def test_usage_errors(capsys, data_dir):
    assert run(capsys, "frobnicate", data_dir / "hopf.sgs")[0] == 2
    assert run(capsys, "validate", data_dir / "missing.sgs")[0] == 2
    assert run(capsys, "reduce", data_dir / "hopf.sgs")[0] == 2
    assert run(capsys, "btilde", data_dir / "hopf.sgs")[0] == 2
    assert run(capsys, "smooth", data_dir / "hopf.sgs", "--budget", "-1")[0] == 2


def test_graph_info(capsys, data_dir):
    code, out, _ = run(capsys, "graph-info", data_dir / "example1.sgg", "--json")
    info = json.loads(out)
    assert code == 0 and info["vertices"] == ["a", "b"] and info["circulating"]
    code, out, _ = run(capsys, "graph-info", data_dir / "theta.sgs")
    assert "chi -1" in out


def test_smooth_json(capsys, data_dir):
    code, out, _ = run(capsys, "smooth", data_dir / "hopf.sgs", "--json")
    assert code == 0 and json.loads(out)["mu"] == 2


def test_reduce(capsys, data_dir):
    code, out, _ = run(capsys, "reduce", data_dir / "hopf.sgs", "--cycle", "a", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["inequality_ok"] and rep["identity_ok"] and rep["mu_d"] == 2
    code, out, _ = run(capsys, "reduce", data_dir / "hopf.sgs", "--cycle", "a")
    assert out.startswith("sliced")
    code, _, _ = run(capsys, "reduce", data_dir / "theta.sgs", "--cycle", "t1")
    assert code == 1


def test_braid_btilde_closure_pipeline(capsys, tmp_path, data_dir):
    w = tmp_path / "w.gbw"
    assert run(capsys, "braid", data_dir / "trivial-example1.sgs", "-o", w)[0] == 0
    code, out, _ = run(capsys, "btilde", w)
    assert code == 0 and out.strip() == "4"
    c = tmp_path / "c.sgs"
    assert run(capsys, "closure", w, "-o", c)[0] == 0
    _, a, _ = run(capsys, "graph-info", c, "--json")
    _, b, _ = run(capsys, "graph-info", data_dir / "trivial-example1.sgs", "--json")
    assert a == b


def test_minimize_and_bounds(capsys, tmp_path, data_dir):
    out_file = tmp_path / "best.sgs"
    code, out, _ = run(capsys, "minimize-s", data_dir / "theta-kinked.sgs", "--json",
                       "--budget", "5000", "--depth", "4", "-o", out_file)
    rep = json.loads(out)
    assert code == 0 and rep["mu"] == 1 and rep["exact"] and rep["moves"]
    assert run(capsys, "smooth", out_file, "--json")[1].count('"mu": 1') == 1
    code, out, _ = run(capsys, "bounds", data_dir / "hopf.sgs", "--json", "--budget", "100",
                       "--oracle", "cycle=a:bridge=1")
    rep = json.loads(out)
    assert code == 0 and rep["b_upper"] == 2 and rep["b_lower"] == 1
    assert run(capsys, "bounds", data_dir / "hopf.sgs", "--oracle", "nonsense")[0] == 1


def test_render_writes_svgs(capsys, tmp_path, data_dir):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "render", data_dir / "hopf.sgs", "-o", a, "--svg", b)[0] == 0
    assert "<svg" in a.read_text() and "<svg" in b.read_text()
    assert run(capsys, "render", data_dir / "hopf.sgs")[0] == 2


def test_report_with_figure(capsys, tmp_path, data_dir):
    fig = tmp_path / "s.svg"
    code, out, _ = run(capsys, "smooth", data_dir / "theta.sgs", "--svg", fig)
    assert code == 0 and out.startswith("mu ") and "<svg" in fig.read_text()


def test_refuses_to_overwrite_input(capsys, tmp_path, data_dir):
    src = tmp_path / "h.sgs"
    src.write_text((data_dir / "hopf.sgs").read_text())
    before = src.read_text()
    assert run(capsys, "reduce", src, "--cycle", "a", "-o", src)[0] == 2
    assert src.read_text() == before
    assert run(capsys, "reduce", src, "--cycle", "a", "-o", src, "--force")[0] == 0
    assert src.read_text() != before


def test_stdin(monkeypatch, capsys, data_dir):
    monkeypatch.setattr(sys, "stdin", io.StringIO((data_dir / "hopf.sgs").read_text()))
    code, out, _ = run(capsys, "smooth", "-", "--json")
    assert code == 0 and json.loads(out)["mu"] == 2


@pytest.mark.parametrize("args", [["smooth", "hopf.sgs", "--json"], ["btilde", "example1-g.gbw"]])
def test_deterministic_output(capsys, data_dir, args):
    argv = [args[0], data_dir / args[1]] + args[2:]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_shell_pipe(data_dir):
    def sh(argv, stdin=None):
        return subprocess.run([sys.executable, "-m", "sgbraid.cli"] + argv, input=stdin,
                              capture_output=True, text=True, check=True).stdout
    word = sh(["braid", str(data_dir / "hopf.sgs")])
    sliced = sh(["closure"], word)
    assert sh(["graph-info", "--json"], sliced) == sh(["graph-info", str(data_dir / "hopf.sgs"), "--json"])
