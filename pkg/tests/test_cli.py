import csv
import io
import json
import subprocess
import sys

import pytest

from stanley.cli import OutputRecord, main

ROW1 = "0,6,13,14,16,17,27,29,30,35,36,49,50"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_gen_plain(capsys):
    code, out, _ = run(capsys, "gen", "--set", "0", "--count", "9", "--format", "plain")
    assert code == 0 and out.strip() == "0 1 3 4 9 10 12 13 27"


def test_verify_table_row(capsys):
    code, rec = run_json(capsys, "verify", "--modulus", "61", "--set", ROW1)
    assert code == 0 and rec["result"]["valid"] is True
    assert rec["command"] == "verify" and rec["parameters"]["modulus"] == 61


def test_verify_negative(capsys):
    code, rec = run_json(capsys, "verify", "--modulus", "10", "--set", "0,1")
    assert code == 1
    assert rec["result"]["valid"] is False
    assert rec["result"]["uncovered"] == [3, 4, 5, 6, 7, 8, 9]


@pytest.mark.parametrize("argv", [
    ["gen"],
    ["verify", "--set", "0,1"],
    ["frobnicate"],
    ["gen", "--set", "0,x"],
    ["scale", "--modulus", "10", "--set", "0,1,7,8", "--alpha", "5"],
    ["expand", "--modulus", "10", "--set", "0,1"],
    ["gen", "--set", "0", "--p", "4"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err and not out


def _numbers_from_json(result):
    from stanley.cli import _cell, _flatten
    return [(k, [_cell(x) for x in (v if isinstance(v, list) else [v])]) for k, v in _flatten(result)]


def _numbers_from_plain(text):
    lines = text.strip().splitlines()
    if len(lines) == 1 and ": " not in lines[0]:
        return [(None, lines[0].split())]
    rows = []
    for line in lines:
        key, _, vals = line.partition(":")
        rows.append((key, vals.split()))
    return rows


def _numbers_from_csv(text):
    return [(row[0], row[1:]) for row in csv.reader(io.StringIO(text))]


@pytest.mark.parametrize("argv", [
    ["gen", "--set", "0,1,7", "--count", "17"],
    ["verify", "--modulus", "10", "--set", "0,1"],
    ["scale", "--modulus", "10", "--set", "0,1,7,8", "--alpha", "9"],
    ["detect", "--set", "0,1,7", "--count", "64"],
    ["gaps", "family", "--m", "0"],
    ["basis", "complete", "--set", "0,4"],
])
def test_formats_carry_identical_content(capsys, argv):
    _, rec = run_json(capsys, *argv)
    expected = _numbers_from_json(rec["result"])
    _, plain, _ = run(capsys, *argv, "--format", "plain")
    _, text, _ = run(capsys, *argv, "--format", "csv")
    from_plain = _numbers_from_plain(plain)
    if from_plain[0][0] is None:
        from_plain = [(expected[0][0], from_plain[0][1])]
    assert from_plain == expected
    assert _numbers_from_csv(text) == expected


def test_golden_sequences(capsys, golden):
    for name in ("S(0)", "S(0,1,7)", "S(0,1,4)", "S_5(0,3)"):
        row = golden[name]
        gens = ",".join(map(str, row["generators"]))
        _, rec = run_json(capsys, "gen", "--set", gens, "--p", str(row["p"]),
                          "--count", str(len(row["terms"])))
        assert rec["result"]["terms"] == row["terms"], name
    for name in ("basis (7,5,25,...) for p=5", "S(0,9,11,12,20)"):
        row = golden[name]
        b = row["basis"]
        _, rec = run_json(capsys, "basis", "gen", "--p", str(b["p"]),
                          "--head", ",".join(map(str, b["head"])), "--tail", str(b["tail_start"]),
                          "--count", str(len(row["terms"])))
        assert rec["result"]["terms"] == row["terms"], name


def test_golden_modular_operations(capsys, golden):
    _, rec = run_json(capsys, "expand", "--modulus", "10", "--set", "0,1,7,8", "--count", "16")
    assert rec["result"]["terms"] == golden["S(0,1,7)"]["terms"][:16]
    _, rec = run_json(capsys, "scale", "--modulus", "10", "--set", "0,1,7,8", "--alpha", "9")
    scaled = rec["result"]
    _, rec = run_json(capsys, "expand", "--modulus", str(scaled["modulus"]),
                      "--set", ",".join(map(str, scaled["residues"])), "--count", "15")
    assert rec["result"]["terms"] == golden["scale of {0,1,7,8} mod 10 by 9"]["terms"]
    _, rec = run_json(capsys, "product", "--modulus", "10", "--set", "0,1,7,8",
                      "--with-set", "0,2", "--with-modulus", "3")
    assert rec["result"] == {"modulus": 30, "residues": [0, 1, 7, 8, 20, 21, 27, 28]}


def test_detect(capsys):
    code, rec = run_json(capsys, "detect", "--set", "0,1,7", "--count", "64")
    assert code == 0 and rec["result"]["lambda"] == 7
    code, rec = run_json(capsys, "detect", "--set", "0,1,4", "--count", "64")
    assert code == 0 and rec["result"]["sigma"] == 0 and rec["result"]["core"] == [0]
    code, rec = run_json(capsys, "detect", "--set", "0,1,4,5,12,14,15,31", "--count", "64")
    assert rec["result"]["sigma"] == 1
    code, rec = run_json(capsys, "detect", "--set", "0,4", "--count", "256")
    assert code == 1 and rec["result"]["kind"] == "none-at-horizon"


def test_build_pseudo(capsys):
    _, rec = run_json(capsys, "build-pseudo", "--modulus", "1", "--set", "0", "--k", "2", "--c", "2")
    assert rec["result"]["generators"] == [0, 1, 3, 4, 11, 12, 14, 15]


def test_basis_commands(capsys):
    code, rec = run_json(capsys, "basis", "validate", "--head", "11,12,9", "--tail", "27")
    assert code == 0 and rec["result"]["valid"] is True
    code, rec = run_json(capsys, "basis", "validate", "--head", "1,7,10", "--tail", "30")
    assert code == 1 and rec["result"]["index"] == 1
    code, rec = run_json(capsys, "basis", "complete", "--set", "0,4")
    assert rec["result"]["head"] == [4, 15] and rec["result"]["tail_start"] == 9


def test_gaps_commands(capsys):
    _, rec = run_json(capsys, "gaps", "family", "--m", "1")
    assert rec["result"]["modulus"] == 841 and len(rec["result"]["residues"]) == 64
    _, rec = run_json(capsys, "gaps", "profile", "--modulus", "29",
                      "--set", "0,2,6,8,11,13,17,19", "--count", "512")
    assert rec["result"]["min_gap_tail"] == 2


def test_search_and_census(capsys, tmp_path):
    census = tmp_path / "census.csv"
    code, rec = run_json(capsys, "search", "--modulus", "10", "--census", str(census))
    assert code == 0 and rec["result"]["complete"]
    assert [0, 1, 7, 8] in rec["result"]["sets"]
    assert census.read_text().startswith("cardinality,count,example")


def test_search_checkpoint_resume(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    _, full = run_json(capsys, "search", "--modulus", "27")
    _, part = run_json(capsys, "search", "--modulus", "27", "--nodes", "100", "--checkpoint", str(ck))
    assert not part["result"]["complete"]
    _, done = run_json(capsys, "search", "--resume", str(ck))
    assert done["result"]["complete"] and done["result"]["sets"] == full["result"]["sets"]


def test_scan_and_classify(capsys):
    _, rec = run_json(capsys, "scan", "--m-max", "4", "--count", "256")
    assert 1 in rec["result"]["modular"]
    _, rec = run_json(capsys, "classify", "--set", "0", "--count", "256")
    assert rec["result"]["classification"] == "type1-evidence"


def test_seed_file_and_out(capsys, tmp_path):
    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps({"p": 3, "modulus": 10, "residues": [0, 1, 7, 8]}))
    out = tmp_path / "out.json"
    code, stdout, _ = run(capsys, "expand", "--seed-file", str(seed), "--count", "8", "--out", str(out))
    assert code == 0 and stdout == ""
    rec = OutputRecord.from_json(out.read_text())
    assert rec.result["terms"] == [0, 1, 7, 8, 10, 11, 17, 18]
    basis = tmp_path / "basis.json"
    basis.write_text(json.dumps({"p": 3, "head": [11, 12, 9], "tail_start": 27}))
    _, rec = run_json(capsys, "basis", "gen", "--seed-file", str(basis), "--count", "4")
    assert rec["result"]["terms"] == [0, 9, 11, 12]


def test_output_record_round_trip():
    rec = OutputRecord("gen", {"set": "0", "count": 4}, {"terms": [0, 1, 3, 4]}, 0.25)
    assert OutputRecord.from_json(rec.to_json()) == rec


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "stanley.cli", "gen", "--set", "0", "--count", "5",
                           "--format", "plain"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0 1 3 4 9"
