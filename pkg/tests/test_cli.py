import io
import json
import math
import subprocess
import sys

import pytest

from pstlab import encode_graph6
from pstlab.cli import main
from pstlab.generators import complete_graph, hypercube_graph, path_graph, petersen_graph

from conftest import DATA


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in {"q3": hypercube_graph(3), "petersen": petersen_graph()}.items():
        paths[name] = tmp_path / f"{name}.g6"
        paths[name].write_text(encode_graph6(g) + "\n")
    paths["p3"] = tmp_path / "p3.txt"
    paths["p3"].write_text("a b\nb c\n")
    paths["k2"] = tmp_path / "k2.txt"
    paths["k2"].write_text("0 1\n")
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_k4_from_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("C~\n"))
        code, out, _ = run(capsys, "analyze", "--format", "g6", "-")
        doc = json.loads(out)
        assert code == 0
        assert doc["graph"]["n"] == 4 and doc["extremal_graph"]
        assert doc["spectrum"]["eigenvalues"] == [3, -1]
        assert doc["pst"]["certificates"] == []

    def test_q3(self, capsys, files):
        code, out, _ = run(capsys, "analyze", files["q3"])
        doc = json.loads(out)
        certs = doc["pst"]["certificates"]
        assert code == 0 and len(certs) == 4
        assert all(c["tau"] == pytest.approx(math.pi / 2) for c in certs)
        assert doc["antipodal_drg"] is True
        assert doc["identity"] == {"lhs": "1/6", "rhs": "1/6", "equal": True}

    def test_table_and_oracle(self, capsys, files):
        code, out, _ = run(capsys, "analyze", files["q3"], "--table", "--verify-oracle")
        assert code == 0
        assert "PST   0 7" in out
        assert "4 pairs, 0 disagreements" in out

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "analyze", "/no/such/file")
        assert code == 2 and err.count("\n") == 1

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.g6"
        bad.write_text("C\n")
        assert run(capsys, "analyze", bad, "--format", "g6")[0] == 2

    def test_refusal(self, capsys, tmp_path):
        g = tmp_path / "p4.txt"
        g.write_text("0 1\n1 2\n2 3\n")
        code, _, err = run(capsys, "analyze", g, "--tol", "0.5")
        assert code == 3 and "refused" in err

    def test_disconnected_is_refused(self, capsys, tmp_path):
        g = tmp_path / "two.txt"
        g.write_text("0 1\n2 3\n")
        assert run(capsys, "analyze", g)[0] == 3

    def test_env_tolerance_and_flag_precedence(self, capsys, files, monkeypatch):
        monkeypatch.setenv("PSTLAB_TOL", "1e-7")
        doc = json.loads(run(capsys, "analyze", files["k2"])[1])
        assert doc["tolerances"]["cluster"] == 1e-7
        doc = json.loads(run(capsys, "analyze", files["k2"], "--tol", "1e-8")[1])
        assert doc["tolerances"]["cluster"] == 1e-8

    def test_deterministic(self, capsys, files):
        first = run(capsys, "analyze", files["petersen"], "--verify-oracle")[1]
        second = run(capsys, "analyze", files["petersen"], "--verify-oracle")[1]
        assert first == second


class TestPst:
    def test_p3(self, capsys, files):
        code, out, _ = run(capsys, "pst", files["p3"], "a", "c")
        cert = json.loads(out)["certificate"]
        assert code == 0
        assert cert["tau"] == pytest.approx(math.pi / math.sqrt(2))
        assert (cert["u"], cert["v"], cert["delta"], cert["alpha"]) == ("a", "c", 2, 1)

    def test_petersen(self, capsys, files):
        code, out, _ = run(capsys, "pst", files["petersen"], "0", "7")
        assert code == 1 and "not antipodal" in json.loads(out)["reason"]

    def test_trivial(self, capsys, files):
        code, out, _ = run(capsys, "pst", files["p3"], "a", "a")
        assert code == 2 and json.loads(out)["reason"] == "trivial pair rejected"

    def test_bad_label(self, capsys, files):
        assert run(capsys, "pst", files["p3"], "a", "z")[0] == 2


class TestScan:
    def test_connected_four(self, capsys):
        code, out, _ = run(capsys, "scan", DATA / "connected_4.g6", "--json")
        rows = {r["graph6"]: r for r in json.loads(out)}
        assert code == 0 and len(rows) == 6
        c4 = rows["Cl"]
        assert c4["pst"] == 2 and c4["strongly_cospectral"] == 2
        p4 = rows["Ck"]  # path 2-1-0-3
        assert p4["pst"] == 0 and p4["strongly_cospectral"] == 2

    def test_input_order_and_errors(self, capsys, tmp_path):
        census = tmp_path / "mixed.g6"
        census.write_text("Cl\nnot-a-graph\n\nC~\n")
        code, out, _ = run(capsys, "scan", census, "--json")
        rows = json.loads(out)
        assert code == 0
        assert [r["status"] for r in rows] == ["OK", "ERROR", "OK"]
        assert [r["line"] for r in rows] == [1, 2, 4]
        assert run(capsys, "scan", census, "--strict")[0] == 1

    def test_empty(self, capsys, tmp_path):
        empty = tmp_path / "empty.g6"
        empty.write_text("")
        code, out, _ = run(capsys, "scan", empty)
        assert code == 0 and len(out.splitlines()) == 1

    def test_parallel_matches_serial(self, capsys):
        serial = run(capsys, "scan", DATA / "connected_5.g6", "--json")[1]
        parallel = run(capsys, "scan", DATA / "connected_5.g6", "--json", "--jobs", "2")[1]
        assert serial == parallel

    def test_verify_oracle(self, capsys):
        rows = json.loads(run(capsys, "scan", DATA / "connected_4.g6", "--json", "--verify-oracle")[1])
        assert all(r["oracle_disagreements"] == 0 for r in rows)


class TestWalk:
    def test_k2(self, capsys, files):
        code, out, _ = run(capsys, "walk", files["k2"], "0", "1", "--t-max", math.pi, "--steps", 5)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "t,fidelity" and len(lines) == 6
        fids = [float(x.split(",")[1]) for x in lines[1:]]
        assert max(fids) == fids[2] == pytest.approx(1, abs=1e-12)

    def test_self_pair(self, capsys, files):
        out = run(capsys, "walk", files["k2"], "0", "0", "--steps", 3)[1]
        assert out.splitlines()[1] == "0,1"

    def test_output_file(self, capsys, files, tmp_path):
        target = tmp_path / "series.csv"
        assert run(capsys, "walk", files["k2"], "0", "1", "--steps", 4, "-o", target)[0] == 0
        assert target.read_text().startswith("t,fidelity\n0,0\n")

    def test_bad_grid(self, capsys, files):
        assert run(capsys, "walk", files["k2"], "0", "1", "--steps", 1)[0] == 2

    def test_unwritable(self, capsys, files, tmp_path):
        assert run(capsys, "walk", files["k2"], "0", "1", "-o", tmp_path / "missing" / "x.csv")[0] == 2


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "pstlab", "pst", str(files["k2"]), "0", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["certificate"]["alpha"] == 2
