import json

from charquo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_witness_ok(capsys):
    code, out = run(capsys, "witness", "31")
    assert code == 0
    assert "split" in out and "nonsplit" in out


def test_witness_degenerate(capsys):
    code, out = run(capsys, "witness", "11")
    assert code == 1
    assert "degenerate" in out


def test_witness_find_prime_json(capsys):
    code, out = run(capsys, "witness", "--mode", "relaxed", "--min", "2", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["p"] == 19
    assert rep["assumptions"]["nonconjugation_5_1"]


def test_json_round_trips(capsys):
    code, out = run(capsys, "witness", "31", "--json")
    rep = json.loads(out)
    assert json.dumps(rep, sort_keys=True, indent=2) + "\n" == out


def test_orbit_report_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    dump = tmp_path / "orbit.chqo"
    code, _ = run(capsys, "orbit", "19", "--seed", "7", "--no-permutations",
                  "--dump", str(dump), "--out", str(out1))
    assert code == 0
    code, _ = run(capsys, "orbit", "19", "--seed", "7", "--no-permutations",
                  "--out", str(out2))
    assert code == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    a["timings_ms"] = b["timings_ms"] = None  # wall clock is not deterministic
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["classification"] == "Alternating"

    code, out = run(capsys, "count", "19", "--orbit", str(dump), "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["x_count"] == 32400
    assert rep["orbit_ratio"] == 1.0


def test_orbit_budget_exit(capsys):
    code, out = run(capsys, "orbit", "19", "--max-points", "10")
    assert code == 2
    assert "budget" in out


def test_count_budget_refusal(capsys):
    code, out = run(capsys, "count", "9973")
    assert code == 2


def test_qrep_verify(capsys):
    code, out = run(capsys, "qrep", "2", "3", "--verify")
    assert code == 0
    assert "dimension 1" in out
    code, out = run(capsys, "qrep", "4", "1", "--verify", "--json")
    assert code == 0
    rep = json.loads(out)
    assert all(rep["checks"].values())


def test_qrep_specialize_and_export(tmp_path, capsys):
    path = tmp_path / "w41.json"
    code, out = run(capsys, "qrep", "4", "1", "--specialize", "1009", "3", "5",
                    "--export", str(path))
    assert code == 0
    exported = json.loads(path.read_text())
    assert exported["dim"] == 3


def test_qrep_caps(capsys):
    code, _ = run(capsys, "qrep", "9", "9")
    assert code == 2


def test_selftest_fast(capsys):
    code, out = run(capsys, "selftest", "--fast")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
