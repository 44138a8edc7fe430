import json
import os
from pathlib import Path

import numpy as np
import pytest

from snlv.arrayfile import parse_binary, parse_text, read_array, write_array
from snlv.cli import main
from snlv.oracle import NaiveOracle

from conftest import SAMPLE

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden_cli.jsonl"

# commands whose JSON output is fully deterministic
GOLDEN_RUNS = [
    ["baxter", "--max-m", "7"],
    ["enumerate", "5"],
    ["reconstruct", "4", "--oracle"],
    ["query", "{ix}", "nsv", "4"],
    ["query", "{ix}", "rmin", "3", "3"],
    ["query", "{ix}", "rminq", "1", "9", "3"],
    ["query", "{ix}", "psv", "7"],
    ["query", "{ix}", "plv", "8"],
    ["query", "{ix}", "rmaxq", "1", "9", "2"],
    ["query", "{ix}", "nsv", "9"],
]


@pytest.fixture(scope="module")
def sample_index(tmp_path_factory):
    out = tmp_path_factory.mktemp("ix") / "sample.snlv"
    assert main(["build", str(DATA / "sample.txt"), "-o", str(out)]) == 0
    return str(out)


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def golden_lines(capsys, ix):
    lines = []
    for argv in GOLDEN_RUNS:
        argv = [a.format(ix=ix) for a in argv] + ["--format", "json"]
        code, out, _ = run(capsys, argv)
        assert code == 0, argv
        lines += out.splitlines()
    return lines


def test_golden_json_lines(capsys, sample_index):
    lines = golden_lines(capsys, sample_index)
    if os.environ.get("SNLV_REGEN_GOLDEN"):
        GOLDEN.write_text("\n".join(lines) + "\n")
    assert lines == GOLDEN.read_text().splitlines()
    for line in lines:
        rec = json.loads(line)
        assert set(rec) == {"cmd", "n", "metric", "value"}


def test_golden_values_agree_with_oracle():
    o = NaiveOracle(SAMPLE)
    recs = [json.loads(x) for x in GOLDEN.read_text().splitlines()]
    for r in recs:
        if r["cmd"] == "query":
            kind, *args = r["metric"].split()
            assert r["value"] == o.query(kind, *map(int, args))
    counts = [r["value"] for r in recs if r["metric"] == "baxter_count"]
    assert counts == [1, 2, 6, 22, 92, 422, 2074]


def test_query_human_output(capsys, sample_index):
    code, out, _ = run(capsys, ["query", sample_index, "nsv", "4"])
    assert code == 0 and out.strip() == "5"
    code, out, _ = run(capsys, ["query", sample_index, "nlv", "9"])
    assert out.strip() == "10"


@pytest.mark.parametrize("args", [["median", "1"], ["rmin", "1"], ["rmin", "4", "3"],
                                  ["psv", "11"], ["rminq", "1", "2", "0"]])
def test_query_usage_errors(capsys, sample_index, args):
    code, _, err = run(capsys, ["query", sample_index] + args)
    assert code == 1 and err


def test_argparse_errors_exit_1(capsys):
    for argv in (["frobnicate"], ["bench", "--levels", "7"], ["build"],
                 ["build", "x", "-o", "y", "--block-size", "100"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 1
    capsys.readouterr()


def test_data_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 x\n")
    assert run(capsys, ["build", str(bad), "-o", str(tmp_path / "o")])[0] == 2
    assert run(capsys, ["build", str(tmp_path / "missing"), "-o", str(tmp_path / "o")])[0] == 2
    junk = tmp_path / "junk.snlv"
    junk.write_bytes(b"SNLVjunk")
    assert run(capsys, ["query", str(junk), "psv", "1"])[0] == 2


def test_build_single_and_general(capsys, tmp_path):
    one = tmp_path / "one.txt"
    write_array(one, [17])
    code, out, _ = run(capsys, ["build", str(one), "-o", str(tmp_path / "one.snlv")])
    assert code == 0
    code, out, _ = run(capsys, ["query", str(tmp_path / "one.snlv"), "nsv", "1"])
    assert out.strip() == "2"
    gen = tmp_path / "gen.bin"
    write_array(gen, [7, 7, 2, 2, 2, 9], binary=True)
    code, out, _ = run(capsys, ["build", str(gen), "-o", str(tmp_path / "g.snlv"),
                                "--format", "json"])
    recs = {json.loads(x)["metric"]: json.loads(x)["value"] for x in out.splitlines()}
    assert code == 0 and recs["general"] is True and recs["C"] == 6


def test_build_reports_sample_core(capsys, tmp_path):
    code, out, _ = run(capsys, ["build", str(DATA / "sample.txt"), "-o", str(tmp_path / "f"),
                                "--format", "json"])
    recs = {json.loads(x)["metric"]: json.loads(x)["value"] for x in out.splitlines()}
    # 3.585 n plus the O(log n) end positions
    assert recs["core_total"] <= 3.585 * 9 + recs["f_values"] + 2


def test_selftest_random_passes(capsys):
    code, out, err = run(capsys, ["selftest", "--scope", "random", "--count", "2",
                                  "--n", "500", "--queries", "300"])
    assert code == 0 and "selftest.pass: True" in out and "FAIL" not in err


def test_selftest_exhaustive_short(capsys):
    code, out, _ = run(capsys, ["selftest", "--scope", "exhaustive", "--max-len", "5"])
    assert code == 0


def test_selftest_catches_injected_fault(capsys):
    code, out, err = run(capsys, ["selftest", "--scope", "random", "--count", "2",
                                  "--n", "500", "--queries", "300", "--inject-fault"])
    assert code == 3
    assert "FAIL random:" in err


def test_bench_small(capsys):
    code, out, _ = run(capsys, ["bench", "--n", "1000", "--queries", "200", "--format", "json"])
    assert code == 0
    metrics = {json.loads(x)["metric"] for x in out.splitlines()}
    assert {"build_seconds", "core_bits_per_n", "latency_us.rmin.p50",
            "prs_min.scan_hist", "nrs_max.scan_p999"} <= metrics


def test_bench_memory_cap(capsys):
    code, _, err = run(capsys, ["bench", "--n", "1000000", "--cap-bytes", "1000"])
    assert code == 2 and "cap" in err


def test_array_files(tmp_path):
    vals = [3, -9, 2**62, 0]
    for binary in (False, True):
        p = tmp_path / f"a{binary}"
        write_array(p, vals, binary=binary)
        assert read_array(p).tolist() == vals
    assert parse_text("1 2\n3\t4").tolist() == [1, 2, 3, 4]
    for bad in ("", "1 2.5", str(2**63)):
        with pytest.raises(ValueError):
            parse_text(bad)
    good = (tmp_path / "aTrue").read_bytes()
    for data in (good[:10], b"SNLB" + good[4:], good[:-1]):
        with pytest.raises(ValueError):
            parse_binary(data)
    assert parse_binary(good).dtype == np.int64
