import json
import subprocess
import sys
from pathlib import Path

import pytest

from balpack import __version__, formats, solve_bmbp, validate_instance
from balpack.cli import main
from balpack.core import InvalidInstance

WORKED = {"sizes": [8, 7, 6, 5, 4], "capacity": 10}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    write.dir = tmp_path
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_bmbp_and_verify(files, capsys):
    inst = files("inst.json", WORKED)
    plan = str(files.dir / "plan.json")
    assert run(["solve-bmbp", "-i", inst, "-o", plan], capsys)[0] == 0
    doc = json.loads(open(plan).read())
    assert doc["sigma"] == [2, 1, 3]
    assert doc["lambda1"] == ["10/11", 1, "9/11"] and doc["lambda2"] == [0, "2/11", "1/11"]
    assert doc["bin_loads"] == [10, 10, 10] and doc["tilde_c"] == 10
    assert all(1 <= a["object"] <= 5 and a["stage"] in (1, 2) for a in doc["assignments"])
    code, out, _ = run(["verify", "--model", "bmbp", "-i", inst, "-s", plan], capsys)
    assert code == 0 and json.loads(out) == {"ok": True, "violations": []}


def test_verify_reports_violations(files, capsys):
    inst = files("inst.json", WORKED)
    plan = json.loads(formats.dumps(formats.plan_to_json(solve_bmbp(validate_instance(WORKED["sizes"], 10)))))
    plan["assignments"][0]["fraction"] = "1/2"
    sol = files("plan.json", plan)
    code, out, _ = run(["verify", "--model", "bmbp", "-i", inst, "-s", sol], capsys)
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    fams = {v["constraint"] for v in report["violations"]}
    assert {"dem", "balance"} <= fams
    bal = next(v for v in report["violations"] if v["constraint"] == "balance")
    assert bal["subject"] == [5, 1, 1]


def test_reduce_solve_extract_oracle(files, capsys):
    src = files("set.json", [2, 3, 3, 4])
    red = str(files.dir / "red.json")
    wit = str(files.dir / "wit.json")
    assert run(["reduce", "--kind", "partition", "-i", src, "-o", red], capsys)[0] == 0
    doc = json.loads(open(red).read())
    assert doc["sizes"] == [2, 3, 3, 4, 10, 10] and doc["capacity"] == "32/3"
    assert doc["reduction"] == {"kind": "partition", "pad_value": 10, "pad_count": 2, "residue": 0}
    assert run(["solve-exact", "-i", red, "-o", wit], capsys)[0] == 0
    assert json.loads(open(wit).read())["alpha"] == ["1/3", "2/3", "2/3"]
    code, out, _ = run(["verify", "--model", "kbfbp", "-i", red, "-s", wit], capsys)
    assert code == 0
    code, out, _ = run(["extract", "-i", red, "-s", wit], capsys)
    parts = json.loads(out)["parts"]
    assert code == 0 and sum(parts[0]) == sum(parts[1]) == 6
    code, out, _ = run(["oracle", "--kind", "partition", "-i", src], capsys)
    assert code == 0 and json.loads(out)["feasible"]


def test_subset_third_pipeline(files, capsys):
    src = files("set.json", {"sizes": [1, 2, 3, 3]})
    red = str(files.dir / "red.json")
    wit = str(files.dir / "wit.json")
    assert run(["reduce", "--kind", "subset-third", "-i", src, "-o", red], capsys)[0] == 0
    assert run(["solve-exact", "-i", red, "-o", wit], capsys)[0] == 0
    code, out, _ = run(["extract", "--kind", "subset-third", "-i", red, "-s", wit], capsys)
    assert code == 0 and sum(json.loads(out)["subset"]) == 3
    assert run(["extract", "--kind", "partition", "-i", red, "-s", wit], capsys)[0] == 2
    code, out, _ = run(["oracle", "--kind", "subset-third", "-i", src], capsys)
    assert code == 0 and json.loads(out)["subset"] == [1, 2]


def test_trivial_reduction_is_input_error(files, capsys):
    code, _, err = run(["reduce", "--kind", "partition", "-i", files("s.json", [1, 2])], capsys)
    assert code == 2 and "trivial" in err


def test_no_witness_and_guard(files, capsys):
    inst = files("i.json", {"sizes": [1, 1, 1], "capacity": 1, "bins": 2, "split_bound": 2})
    code, _, err = run(["solve-exact", "-i", inst], capsys)
    assert code == 1 and err
    big = files("b.json", {"sizes": [1] * 8, "capacity": 10})
    assert run(["solve-exact", "-i", big, "--bins", "4", "--split", "3"], capsys)[0] == 3


def test_input_errors(files, capsys):
    assert run(["solve-bmbp", "-i", files("x.json", {"sizes": []})], capsys)[0] == 2
    assert run(["solve-bmbp", "-i", files("x.json", {"sizes": [0], "capacity": 1})], capsys)[0] == 2
    assert run(["solve-bmbp", "-i", files("x.json", {"sizes": [20, 1], "capacity": 10})], capsys)[0] == 2
    assert run(["solve-bmbp", "-i", str(files.dir / "missing.json")], capsys)[0] == 2
    bad = files.dir / "bad.json"
    bad.write_text("{nope")
    assert run(["solve-bmbp", "-i", str(bad)], capsys)[0] == 2
    with pytest.raises(SystemExit):
        main([])


def test_oracle_binpacking(files, capsys):
    inst = files("i.json", {"sizes": [6, 5, 5], "capacity": 10})
    code, out, _ = run(["oracle", "--kind", "binpacking", "-i", inst, "--bins", "2"], capsys)
    assert code == 0 and json.loads(out)["bin_of"] == [1, 2, 2]
    assert run(["oracle", "--kind", "binpacking", "-i", inst, "--bins", "1"], capsys)[0] == 1


def test_oracle_sweep(capsys):
    code, out, _ = run(["oracle", "--kind", "partition", "--sweep", "--max-n", "4", "--max-size", "5"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["cases"] > 0 and doc["disagreements"] == []


def test_export_mip_matches_golden(files, capsys):
    inst = files("inst.json", WORKED)
    out = files.dir / "m.lp"
    assert run(["export-mip", "--kind", "bmbp", "--bins", "3", "-i", inst, "-o", str(out)], capsys)[0] == 0
    golden = Path(__file__).parent / "golden" / "worked_bmbp.lp"
    assert out.read_bytes() == golden.read_bytes()
    assert run(["export-mip", "--kind", "kbfbp", "-i", inst], capsys)[0] == 2


def test_bench_is_deterministic_apart_from_timing(files, capsys):
    a = files.dir / "a.json"
    b = files.dir / "b.json"
    for target in (a, b):
        code, out, _ = run(["bench", "--n", "2000", "--seed", "5", "--instance-out", str(target)], capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(out)
    assert doc["n"] == 2000 and doc["seconds"] >= 0
    sizes = json.loads(a.read_text())["sizes"]
    assert max(sizes) - min(sizes) <= 100


def test_outputs_are_byte_identical(files, capsys):
    inst = files("inst.json", {"sizes": [9, 3, 7, 7, 2, 5, 6], "capacity": "17/2"})
    first = run(["solve-bmbp", "-i", inst], capsys)[1]
    second = run(["solve-bmbp", "-i", inst], capsys)[1]
    assert first == second


def test_version_and_console_script():
    out = subprocess.run([sys.executable, "-m", "balpack.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout


def test_formats_round_trip():
    inst = validate_instance([3, 1, 2], "5/2", bins=2, split_bound=1)
    assert formats.instance_from_json(formats.instance_to_json(inst)) == inst
    with pytest.raises(InvalidInstance):
        formats.instance_from_json({"sizes": [1]})
    with pytest.raises(InvalidInstance):
        formats.instance_from_json({"sizes": [1], "capacity": 0.5})
    with pytest.raises(InvalidInstance):
        formats.sizes_from_json({"sizes": [1, "2"]})
    with pytest.raises(InvalidInstance):
        formats.witness_from_json({"x": [[1]]})
