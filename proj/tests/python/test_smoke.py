import math

import pytest

import qsba


def test_closed_forms():
    cf = qsba.closed_forms()
    assert cf["p_success"] == pytest.approx((1 + math.sin(math.pi / 4)) / 2)
    assert cf["p_inconclusive"] == pytest.approx(math.cos(math.pi / 4))


def test_success_bounds_sandwich():
    b = qsba.success_bounds(10)
    assert b["valid"]
    assert b["lower"] <= b["exact"] <= b["upper"]
    assert b["lower"] == pytest.approx(0.96875)


def test_small_attack_run():
    report = qsba.attack("projective", trials=2000, seed=7)
    assert report["attack"] == "semi_honest_projective"
    metric = report["metrics"]["per_bit_success"]
    assert metric["trials"] == 16000
    assert report["consistent"]
    with pytest.raises(TypeError):
        qsba.attack("projective", trails=5)


def test_attack_is_deterministic():
    a = qsba.attack("usd", trials=500, seed=3)
    b = qsba.attack("usd", trials=500, seed=3)
    assert a == b


def test_honest_sqsba_session():
    run = qsba.run_sqsba(["0110", "1011", "0011"], seed=12)
    assert run["verdict"] == "fair"
    assert run["winner"] == 2
    assert run["winning_bid"] == "1011"
    assert all(run["semi_quantum"].values())


def test_honest_legacy_session():
    run = qsba.run_legacy("liu", ["01", "11"], seed=1)
    assert run["verdict"] == "fair"
    assert run["winner"] == 2


def test_cli_exit_codes(tmp_path):
    assert qsba.run_cli(["attack", "no_such_attack"]) == 2
    out = tmp_path / "report.csv"
    assert qsba.run_cli(["attack", "projective", "--trials", "200", "--out", str(out)]) == 0
    assert out.read_text().startswith("metric,")
