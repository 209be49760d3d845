import json
import subprocess
import sys
from pathlib import Path

import pytest

from treelift.cli import main

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"
K3 = str(GRAPHS / "k3.graph")
TWO = str(GRAPHS / "two_cycle.graph")
THREE = str(GRAPHS / "three_cycle.graph")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("path", [K3, TWO, THREE])
def test_verify_bundled_graphs(capsys, path):
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    assert out.splitlines()[-1] == "summary\tpass=14\tfail=0\tskip=0"


def test_verify_structured_to_file(capsys, tmp_path):
    dest = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", K3, "--format", "structured", "--output", str(dest), "--checks", "phi,m-condition")
    assert code == 0 and out == ""
    doc = json.loads(dest.read_text())
    assert doc["values"] == {"phi": 27, "tau": 9, "tau_lift": 243}


def test_verify_output_is_byte_identical(capsys):
    _, a, _ = run(capsys, "verify", THREE, "--seed", "5")
    _, b, _ = run(capsys, "verify", THREE, "--seed", "5")
    assert a == b


def test_enumerate_trees(capsys):
    code, out, _ = run(capsys, "enumerate", K3, "trees", "--root", "0")
    assert code == 0
    assert out.splitlines() == [
        "tree\troot=0\t1>0,2>0\tweight=1",
        "tree\troot=0\t1>0,2>1\tweight=1",
        "tree\troot=0\t1>2,2>0\tweight=1",
    ]


def test_enumerate_forests_and_subsets(capsys):
    _, out, _ = run(capsys, "enumerate", K3, "forests", "--roots", "0,1")
    assert len(out.splitlines()) == 2
    _, out, _ = run(capsys, "enumerate", K3, "subsets")
    assert "subset\t0,1\tk=2\tm=1" in out.splitlines()


def test_lift_and_check_lift(capsys, tmp_path):
    prefix = str(tmp_path / "k3lift")
    code, out, _ = run(capsys, "lift", K3, "--out", prefix)
    assert code == 0 and "9 vertices" in out
    code, out, _ = run(capsys, "check-lift", K3, prefix + ".graph", prefix + ".labels")
    assert code == 0 and out.startswith("check\tlift-file\tPASS")
    lines = Path(prefix + ".graph").read_text().splitlines()
    i = next(k for k, line in enumerate(lines) if line.startswith("edge"))
    u, v = lines[i].split()[1:3]
    lines[i] = f"edge {u} {v} 5"
    Path(prefix + ".graph").write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check-lift", K3, prefix + ".graph", prefix + ".labels")
    assert code == 1 and "FAIL" in out and "witness" in out


def test_phi_zeta_schrodinger(capsys, tmp_path):
    code, out, _ = run(capsys, "phi", K3)
    assert code == 0 and "phi_product\t27" in out and out.endswith("agree\tyes\n")
    uk3 = tmp_path / "uk3.graph"
    uk3.write_text("graph 3\n" + "".join(f"edge {u} {v} 1/2\n" for u in range(3) for v in range(3) if u != v))
    code, out, _ = run(capsys, "zeta", str(uk3), "--order", "3")
    assert code == 0
    assert [line.split("\t")[2] for line in out.splitlines() if line.startswith("coeff")] == ["1", "0", "3/4", "1/4"]
    code, out, _ = run(capsys, "schrodinger", TWO)
    assert code == 0 and out.startswith("check\tschrodinger\tPASS")


@pytest.mark.parametrize(
    "text, message",
    [
        ("graph 2\nedge 0 1 1\n", "not strongly connected"),
        ("graph 2\nedge 0 1 q!\n", "line 2"),
        ("edge 0 1 1\n", "line 1"),
    ],
)
def test_input_errors_exit_2(capsys, tmp_path, text, message):
    p = tmp_path / "bad.graph"
    p.write_text(text)
    code, _, err = run(capsys, "verify", str(p))
    assert code == 2 and message in err


def test_caps_exit_2(capsys):
    code, _, err = run(capsys, "verify", K3, "--lift-cap", "5")
    assert code == 2 and "9 vertices" in err
    code, _, err = run(capsys, "phi", THREE, "--symbolic-cap", "1")
    assert code == 2 and "symbolic cap" in err


def test_usage_errors_exit_2(capsys):
    assert main(["bogus"]) == 2
    assert main(["verify", K3, "--checks", "nope"]) == 2
    assert main(["verify", "/nonexistent/file.graph"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "treelift", "enumerate", K3, "trees", "--root", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 3
