import subprocess
import sys

import pytest

from entcomm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(out):
    return [line for line in out.splitlines() if not line.startswith("duration_s")]


def test_verify_lemma1(capsys):
    code, out, _ = run(capsys, "verify", "lemma1")
    assert code == 0
    assert out.count("1.000000000000") == 4
    assert "verdict: pass" in out


def test_verify_lower_bound_f(capsys):
    code, out, _ = run(capsys, "verify", "lower-bound-f")
    assert code == 0
    assert "result.depth3: infeasible" in out
    assert "result.depth4: feasible" in out
    assert "result.witness: (A " in out


def test_verify_two_bit_bound_g(capsys):
    code, out, _ = run(capsys, "verify", "two-bit-bound-g")
    assert code == 0
    assert "result.max_success: 3/4" in out


def test_unknown_claim_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 2
    assert "usage" in err


def test_kv_format(capsys, monkeypatch):
    code, out, _ = run(capsys, "--format", "kv", "verify", "table1")
    assert code == 0
    assert "verdict=pass" in out.splitlines()
    monkeypatch.setenv("ENTCOMM_FORMAT", "kv")
    _, out_env, _ = run(capsys, "verify", "table1")
    assert body(out_env) == body(out)


def test_simulate_ghz(capsys):
    code, out, _ = run(capsys, "simulate", "ghz", "--input", "1", "1", "0", "--shots", "10", "--seed", "7")
    assert code == 0
    assert "result.correct: 10/10" in out
    assert out.count("result.run[") == 10


def test_simulate_chsh(capsys):
    code, out, _ = run(capsys, "simulate", "chsh", "--input", "0", "0", "--shots", "100000", "--seed", "7")
    assert code == 0
    assert "result.exact: 0.853553390593" in out
    rate = float(next(l for l in out.splitlines() if l.startswith("result.success_rate")).split(": ")[1])
    assert abs(rate - 0.853553390593) <= 0.00335


def test_simulate_is_reproducible(capsys):
    args = ("simulate", "chsh", "--input", "3", "1", "--shots", "15", "--seed", "99")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert body(a) == body(b)


@pytest.mark.parametrize(
    "argv",
    [
        ("simulate", "chsh", "--input", "0", "0", "--shots", "0"),
        ("simulate", "chsh", "--input", "0", "4"),
        ("simulate", "ghz", "--input", "1", "0", "0"),
        ("simulate", "ghz", "--input", "1", "0"),
        ("enumerate", "f", "--depth", "6"),
        ("enumerate", "g", "--depth", "4"),
        ("--format", "xml", "verify", "table1"),
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_enumerate_f(capsys):
    code, out, _ = run(capsys, "enumerate", "f", "--depth", "3")
    assert code == 0 and "result.feasible: infeasible" in out
    code, out, _ = run(capsys, "enumerate", "f", "--depth", "4")
    assert code == 0 and "result.feasible: feasible" in out
    assert "result.witness: (A" in out


def test_enumerate_g(capsys):
    code, out, _ = run(capsys, "enumerate", "g", "--depth", "2")
    assert code == 0 and "result.max_success: 3/4" in out
    _, out, _ = run(capsys, "enumerate", "g", "--depth", "3")
    assert "result.max_success: 1/1" in out


def test_entropy_flag_records_seed(capsys):
    code, out, _ = run(capsys, "simulate", "ghz", "--input", "0", "0", "0", "--shots", "5", "--entropy")
    assert code == 0 and "param.seed: " in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entcomm", "verify", "table1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verdict: pass" in proc.stdout
