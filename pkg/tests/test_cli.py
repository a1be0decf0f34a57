import json
import os
import subprocess
import sys

import pytest

SRC = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir, "src"))
GOLDEN_52 = "1001101101010000010111111001111001000011111100100010"


def run_cli(*args, stdin=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "ebconst", *args],
        capture_output=True,
        text=True,
        input=stdin,
        env=env,
        timeout=300,
    )


def test_digits_ascii_golden():
    result = run_cli("digits", "--n", "52", "--format", "ascii")
    assert result.returncode == 0
    assert result.stdout.strip() == GOLDEN_52


def test_digits_with_integer_part():
    result = run_cli("digits", "--n", "4", "--with-integer-part")
    assert result.stdout.strip() == "1.1001"


def test_digits_hex_packs_nibbles():
    result = run_cli("digits", "--n", "8", "--format", "hex")
    assert result.stdout.strip() == "9b"


def test_methods_agree():
    naive = run_cli("digits", "--n", "64", "--method", "naive")
    sieve = run_cli("digits", "--n", "64", "--method", "sieve")
    assert naive.stdout == sieve.stdout


def test_window_subcommand():
    result = run_cli("window", "--pos", "49", "--width", "4")
    assert result.stdout.strip() == "0010"


def test_unknown_subcommand_exits_2():
    result = run_cli("frobnicate")
    assert result.returncode == 2
    assert result.stdout == ""


def test_bad_flag_value_exits_2():
    result = run_cli("digits", "--n", "0")
    assert result.returncode == 2
    assert "error" in result.stderr


def test_scan_json():
    result = run_cli("scan", "--pattern", "11", "--n", "52")
    payload = json.loads(result.stdout)
    assert payload["count"] == 15
    assert payload["positions"][0] == 4


def test_scan_literal_digits_tsv():
    result = run_cli("scan", "--pattern", "11", "--digits", "111",
                     "--format", "tsv")
    assert result.stdout.strip() == "11\t2\t1,2"


def test_scan_position_suppression():
    result = run_cli("scan", "--pattern", "11", "--n", "52",
                     "--max-positions", "3")
    assert json.loads(result.stdout)["positions"] is None


def test_scan_block_frequency():
    result = run_cli("scan", "--n", "52", "--block-freq", "2")
    table = json.loads(result.stdout)
    assert sum(table.values()) == 51
    assert set(table) == {"00", "01", "10", "11"}


def test_witness_verify_round_trip():
    witness = run_cli("witness", "--k", "3", "--window", "5:20",
                      "--m-max", "100000")
    assert witness.returncode == 0
    verify = run_cli("verify", "--stdin", stdin=witness.stdout)
    assert verify.returncode == 0
    lines = [line for line in verify.stdout.splitlines() if line]
    assert all("\tpass\t" in line for line in lines)


def test_witness_exhausted_exits_3():
    result = run_cli("witness", "--k", "3", "--window", "5:20", "--m-max", "2")
    assert result.returncode == 3
    assert "no witness in range" in result.stderr


def test_verify_rejects_tampered_certificate(tmp_path):
    witness = run_cli("witness", "--k", "3", "--window", "5:20",
                      "--m-max", "100000")
    payload = json.loads(witness.stdout)
    payload["A"] = str(int(payload["A"]) + 25)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    verify = run_cli("verify", "--file", str(path))
    assert verify.returncode == 2
    assert "failed verification" in verify.stderr


def test_erdos_run_tsv():
    result = run_cli("erdos-run", "--t", "2", "--group", "3", "--group", "5,7")
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == "x=6159\tmodulus=11025"


def test_lemmas_suite_records():
    result = run_cli("lemmas", "--suite", "lemma2", "--count", "20",
                     "--y-max", "100000", "--seed", "3")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert len(lines) == 20
    assert all(line.endswith("verdict=pass") for line in lines)


def test_lemmas_lemma3_tails():
    result = run_cli("lemmas", "--suite", "lemma3", "--k", "2",
                     "--tails", "1,0,0")
    assert result.returncode == 0
    assert "exceed=1" in result.stdout
    assert "markov=pass" in result.stdout


def test_agp_json():
    result = run_cli("agp", "--x", "100", "--d", "3", "--a", "1")
    payload = json.loads(result.stdout)
    assert payload["count"] == 11
    assert payload["satisfied"] is True


@pytest.mark.parametrize("args", [
    ("digits", "--n", "52"),
    ("window", "--pos", "5", "--width", "4"),
    ("scan", "--pattern", "11", "--n", "52"),
    ("witness", "--k", "3", "--window", "5:20", "--m-max", "100000"),
    ("lemmas", "--suite", "lemma2", "--count", "5", "--y-max", "10000",
     "--seed", "9"),
])
def test_repeated_runs_are_byte_identical(args):
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode
