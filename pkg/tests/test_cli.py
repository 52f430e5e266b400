import json

import pytest

from semistream.cli import main
from semistream.generators import adversarial_paths
from semistream.stream_engine import save_instance

from .conftest import inst


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "tri.el"
    save_instance(inst(4, [(1, 2), (2, 3), (1, 3), (3, 0)]), path)
    return path


def test_run_with_opt(tri_file, capsys):
    assert main(["run", "--algo", "tri2", "--input", str(tri_file), "--order", "file", "--opt"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "output=2 opt=2 ratio=1/1"


def test_run_json_report_round_trips(tri_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    args = ["run", "--algo", "wing-gen", "--input", str(tri_file), "--order", "random",
            "--seed", "9", "--opt", "--json", str(out)]
    assert main(args) == 0
    first = json.loads(out.read_text())
    assert main(args) == 0
    assert json.loads(out.read_text()) == first
    assert {"instance", "n", "m", "algo", "order", "seed", "passes", "output_size",
            "opt_size", "ratio", "memory"} <= first.keys()
    assert first["ratio"]["num"] * first["opt_size"] == first["output_size"] * first["ratio"]["den"]


def test_audit_exit_zero_and_records(tri_file, tmp_path, capsys):
    out = tmp_path / "a.json"
    code = main(["audit", "--algo", "wing-gen", "--input", str(tri_file), "--order", "random",
                 "--seed", "9", "--json", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["audit"] and all(r["holds"] for r in rep["audit"])
    assert {"id", "lhs", "rhs", "holds"} <= rep["audit"][0].keys()


def test_strict_tf_rejects_triangle(tri_file, capsys):
    code = main(["run", "--algo", "wing-tf", "--input", str(tri_file), "--strict-tf"])
    assert code != 0
    assert "triangle" in capsys.readouterr().err


def test_unknown_algo_and_missing_file(tri_file, tmp_path, capsys):
    assert main(["run", "--algo", "nope", "--input", str(tri_file)]) != 0
    assert main(["run", "--algo", "greedy", "--input", str(tmp_path / "missing.el")]) != 0
    err = capsys.readouterr().err
    assert "unknown algorithm" in err and "cannot read" in err


def test_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.el"
    bad.write_text("2 1\n0 0\n")
    assert main(["run", "--algo", "greedy", "--input", str(bad)]) != 0
    assert "line 2" in capsys.readouterr().err


def test_gen_then_bench_adversarial(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for k in (3, 10):
        assert main(["gen", "--family", "adversarial_paths", "--k", str(k),
                     "--out", str(corpus / f"adv{k}.el")]) == 0
    csv_path = tmp_path / "s.csv"
    assert main(["bench", "--dir", str(corpus), "--algo", "greedy", "--algo", "wing-tf",
                 "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "algo,instances,min_ratio,mean_ratio,max_peak_edges"
    rows = {l.split(",")[0]: l.split(",") for l in lines[1:]}
    assert rows["greedy"][2] == "1/2"
    assert rows["wing-tf"][2] == "1/1"


def test_gen_to_stdout(capsys):
    assert main(["gen", "--family", "gnp", "--n", "6", "--p", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "6 15" in out.splitlines()


def test_gen_bad_param(capsys):
    assert main(["gen", "--family", "gnp", "--n", "6", "--p", "2"]) != 0


def test_bench_empty_dir(tmp_path, capsys):
    assert main(["bench", "--dir", str(tmp_path)]) != 0


def test_ratio_when_optimum_is_zero(tmp_path, capsys):
    path = tmp_path / "empty.el"
    save_instance(inst(3, []), path)
    assert main(["run", "--algo", "tri3", "--input", str(path), "--opt"]) == 0
    assert "ratio=1/1" in capsys.readouterr().out
