import json
import subprocess
import sys

import pytest

from stareigen.cli import main

M2_FILE = {"n": 4, "entries": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 5, 0, -5], [0, 0, 0, 0]]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def checks_by_name(report):
    out = {}
    for c in report["checks"]:
        out.setdefault(c["name"], []).append(c)
    return out


def test_graph_stats_report(capsys):
    code, out, _ = run(capsys, "graph-stats", "--n", "3", "--n-max", "5")
    assert code == 0
    rep = json.loads(out)
    assert [r["diameter"] for r in rep["results"]] == [3, 4, 6]
    assert rep["results"][0]["girth"] == 6
    assert rep["results"][1]["order"] == 24 and rep["results"][1]["degree"] == 3
    assert rep["version"] and rep["parameters"] == {"n": 3, "n_max": 5}
    assert "timing_seconds" not in rep


def test_graph_stats_range_error(capsys):
    code, _, err = run(capsys, "graph-stats", "--n", "3", "--n-max", "9")
    assert code == 2
    assert "outside" in err


def test_verify_passes_and_is_byte_identical(capsys):
    args = ("verify", "--n", "3", "--n-max", "4", "--samples", "5", "--seed", "3")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["parameters"]["seed"] == 3
    assert set(checks_by_name(rep)) == {"basis-rank", "eigenvalue-equation", "matrix-correspondence",
                                        "coset-code-quotient", "equality-family"}


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--n-max", "4", "--samples", "3", "--inject-fault")
    assert code == 1
    rep = json.loads(out)
    for name, entries in checks_by_name(rep).items():
        assert all(c["passed"] == (name != "eigenvalue-equation") for c in entries)
    assert rep["summary"]["ok"] is False


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "partition-check", "--n", "7", "--timing")
    assert "timing_seconds" in json.loads(out)


def test_min_support_n3(capsys):
    code, out, _ = run(capsys, "min-support", "--n", "3")
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["best_support"] == 4
    assert res["is_proven_optimal"] and res["label"] == "minimum"
    assert len(res["optimal_witnesses"]) == 3


def test_min_support_heuristic_is_informational(capsys):
    code, out, _ = run(capsys, "min-support", "--n", "4", "--radius", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["results"][0]["label"] == "heuristic upper bound"
    assert rep["checks"][0]["gating"] is False
    assert rep["summary"]["informational"] == 1


def test_min_support_cap(capsys):
    code, _, err = run(capsys, "min-support", "--n", "5", "--radius", "2", "--max-points", "10")
    assert code == 2
    assert "cap" in err


def test_classify_m2_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(M2_FILE))
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["class"] == {"kind": "M2", "x": "5", "q1": 2, "q2": 4, "tau": 3}
    assert res["is_special"] and res["theta_uniform"] == 3
    assert res["lower_bound"]["g_M"] == 12 and res["lower_bound"]["mode"] == "informational"


def test_classify_parse_error_location(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3,\n "entries": [[0, 0, 0]\n [0, 1, -1]]}')
    code, _, err = run(capsys, "classify", str(path))
    assert code == 2
    assert "line 3" in err and "column" in err


def test_classify_rejects_float_entry(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 3, "entries": [[0, 0, 0], [0, "0.5", "-1/2"], [0, 0, 0]]}))
    code, _, err = run(capsys, "classify", str(path))
    assert code == 2
    assert "entry (2,2)" in err


def test_classify_non_special(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 3, "entries": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0
    res = json.loads(out)["results"][0]
    assert not res["is_special"] and res["violations"]
    assert "lower_bound" not in res


def test_partition_check_range(capsys):
    code, out, _ = run(capsys, "partition-check", "--n", "7", "--n-max", "12")
    assert code == 0
    rep = json.loads(out)
    assert [r["exceptions"] for r in rep["results"]] == [[[n - 2, 1, 1]] for n in range(7, 13)]


def test_crc_check(capsys):
    code, out, _ = run(capsys, "crc-check", "--n", "3", "--n-max", "4", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,n,passed,gating,expected,computed"
    assert len(lines) == 5


def test_fuzz_small(capsys):
    code, out, _ = run(capsys, "fuzz-theorem1", "--n", "3", "--samples", "10", "--seed", "1")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["results"]) == 10
    assert all(c["gating"] for c in rep["checks"])


def test_fuzz_unproven_n_is_informational(capsys):
    code, out, _ = run(capsys, "fuzz-theorem1", "--n", "5", "--samples", "4")
    assert code == 0
    assert all(not c["gating"] for c in json.loads(out)["checks"])


def test_text_format_and_out_file(capsys, tmp_path):
    dest = tmp_path / "r.txt"
    code, out, _ = run(capsys, "crc-check", "--n", "3", "--format", "text", "--out", str(dest))
    assert code == 0 and out == ""
    text = dest.read_text()
    assert text.startswith("crc-check (stareigen")
    assert "[PASS] rho-2-and-quotient n=3" in text


def test_export_csv(capsys):
    code, out, _ = run(capsys, "export", "--n", "3", "--elementary", "1,2,3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[3] == '2,"2,1,3",1'


def test_export_too_large(capsys):
    code, _, err = run(capsys, "export", "--n", "7", "--elementary", "1,2,3")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stareigen", "partition-check", "--n", "8", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[PASS] unique-exception n=8" in proc.stdout


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--n", "x"])
    assert info.value.code == 2
