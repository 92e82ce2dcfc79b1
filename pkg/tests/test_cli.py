"""Command-line surface: gen, count, mine, bench, exit codes."""

from __future__ import annotations

import json

import pytest

from epimine.cli import main

STREAM = "1.0,A\n8.0,B\n20.0,C\n21.0,A\n28.0,B\n40.0,C\n"
CONSTRAINTS = "(5,10];(10,15]"
EPISODE = "A -(5,10]-> B -(10,15]-> C"


@pytest.fixture()
def stream_file(tmp_path):
    path = tmp_path / "stream.txt"
    path.write_text(STREAM, encoding="utf-8")
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_serial(stream_file, capsys):
    code, out, _ = run(capsys, ["count", stream_file, "--episode", EPISODE])
    assert code == 0
    assert out.strip() == "2"


def test_count_relaxed_at_least_exact(stream_file, capsys):
    code, out, _ = run(
        capsys, ["count", stream_file, "--episode", EPISODE, "--relaxed"],
    )
    assert code == 0
    assert int(out.strip()) >= 2


@pytest.mark.parametrize("segments", ["1", "2", "4", "8"])
def test_count_segments_matches_plain(stream_file, capsys, segments):
    code, out, _ = run(
        capsys,
        ["count", stream_file, "--episode", EPISODE, "--segments", segments],
    )
    assert code == 0
    assert out.strip() == "2"


def test_mine_table(stream_file, capsys):
    code, out, err = run(
        capsys,
        ["mine", stream_file, "--constraints", CONSTRAINTS, "--threshold", "1"],
    )
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert ["1", "A", "2"] in rows
    assert ["3", EPISODE, "2"] in rows
    assert all(len(r) == 3 for r in rows)
    assert "level 1" in err


def test_mine_one_pass_identical_table(stream_file, capsys):
    base = ["mine", stream_file, "--constraints", CONSTRAINTS, "--threshold", "1"]
    code_two, out_two, _ = run(capsys, base)
    code_one, out_one, _ = run(capsys, base + ["--one-pass"])
    assert code_two == code_one == 0
    assert out_two == out_one


def test_mine_strategy_override_identical_table(stream_file, capsys):
    base = ["mine", stream_file, "--constraints", CONSTRAINTS, "--threshold", "1"]
    _, ref, _ = run(capsys, base)
    for extra in (["--strategy", "episode"], ["--strategy", "segment", "--segments", "4"]):
        code, out, _ = run(capsys, base + extra)
        assert code == 0
        assert out == ref


def test_mine_max_level(stream_file, capsys):
    code, out, _ = run(
        capsys,
        ["mine", stream_file, "--constraints", CONSTRAINTS,
         "--threshold", "1", "--max-level", "1"],
    )
    assert code == 0
    levels = {line.split("\t")[0] for line in out.strip().splitlines()}
    assert levels == {"1"}


def test_gen_count_mine_flow(tmp_path, capsys):
    out_file = tmp_path / "synth.txt"
    ledger_file = tmp_path / "synth.txt.ledger.json"
    code, _, _ = run(
        capsys,
        ["gen", "-o", str(out_file), "--seed", "7", "--neurons", "4",
         "--rate", "1.0", "--duration", "40",
         "--chain", "A>B>C@(0.001,0.005]p1.0"],
    )
    assert code == 0
    ledger = json.loads(ledger_file.read_text())
    complete = ledger["chains"][0]["complete"]
    assert complete > 0

    code, out, _ = run(
        capsys,
        ["count", str(out_file), "--episode", "A -(0.001,0.005]-> B -(0.001,0.005]-> C"],
    )
    assert code == 0
    assert int(out.strip()) >= complete

    code, out, _ = run(
        capsys,
        ["mine", str(out_file), "--constraints", "(0.001,0.005]",
         "--threshold", str(complete), "--max-level", "3"],
    )
    assert code == 0
    assert any(
        line.split("\t")[1] == "A -(0.001,0.005]-> B -(0.001,0.005]-> C"
        for line in out.strip().splitlines()
    )


def test_gen_deterministic(tmp_path, capsys):
    paths = []
    for name in ("a.txt", "b.txt"):
        p = tmp_path / name
        code, _, _ = run(
            capsys,
            ["gen", "-o", str(p), "--seed", "3", "--neurons", "3",
             "--rate", "2.0", "--duration", "10"],
        )
        assert code == 0
        paths.append(p.read_text())
    assert paths[0] == paths[1]


def test_bench_agrees(stream_file, capsys):
    code, out, err = run(
        capsys,
        ["bench", stream_file, "--constraints", CONSTRAINTS,
         "--threshold", "1", "--levels", "3"],
    )
    assert code == 0
    assert "all setups agree" in err
    header, *rows = out.strip().splitlines()
    assert header.split("\t")[:2] == ["level", "setup"]
    assert len(rows) >= 4


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, ["count", "/nonexistent/x.txt", "--episode", "A"])
    assert code == 2
    assert "error:" in err


def test_malformed_stream_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1.0,A\nxx\n", encoding="utf-8")
    code, _, err = run(capsys, ["count", str(p), "--episode", "A"])
    assert code == 2
    assert "line 2" in err


def test_unsorted_stream_exit_2_and_sort_recovers(tmp_path, capsys):
    p = tmp_path / "unsorted.txt"
    p.write_text("8.0,B\n1.0,A\n", encoding="utf-8")
    code, _, _ = run(capsys, ["count", str(p), "--episode", "A"])
    assert code == 2
    code, out, _ = run(capsys, ["count", str(p), "--episode", "A", "--sort"])
    assert code == 0
    assert out.strip() == "1"


def test_bad_episode_text_exit_2(stream_file, capsys):
    code, _, _ = run(capsys, ["count", stream_file, "--episode", "A -(5,"])
    assert code == 2


def test_bad_constraints_exit_2(stream_file, capsys):
    code, _, _ = run(
        capsys,
        ["mine", stream_file, "--constraints", "(5 10]", "--threshold", "1"],
    )
    assert code == 2


def test_bad_chain_exit_2(tmp_path, capsys):
    code, _, _ = run(
        capsys,
        ["gen", "-o", str(tmp_path / "x.txt"), "--chain", "A>"],
    )
    assert code == 2


def test_bad_segments_exit_2(stream_file, capsys):
    code, _, _ = run(
        capsys,
        ["count", stream_file, "--episode", "A", "--segments", "3"],
    )
    assert code == 2
