import math

import pytest

import almostdom


def test_estimate_complement():
    x1 = [1.0, 2.0, 3.0, 4.0, 10.0]
    x2 = [2.0, 2.5, 3.0, 3.5, 4.0]
    a = almostdom.estimate(x1, x2)
    b = almostdom.estimate(x2, x1)
    assert 0.0 <= a["c_hat"] <= 1.0
    assert math.isclose(a["c_hat"] + b["c_hat"], 1.0, abs_tol=1e-12)


def test_confidence_interval_is_deterministic():
    x1 = [0.5 + 0.1 * k for k in range(40)]
    x2 = [0.2 + 0.02 * k * k for k in range(40)]
    r1 = almostdom.confidence_interval(x1, x2, t_n=1.0, n_boot=100, seed=3)
    r2 = almostdom.confidence_interval(x1, x2, t_n=1.0, n_boot=100, seed=3)
    assert r1 == r2
    assert r1["ci_lo"] <= r1["ci_hi"]


def test_presets_and_quantile():
    assert "ldc-a" in almostdom.preset_names()
    assert math.isclose(almostdom.preset_population("sdc-d"), 3.0 / 7.0, abs_tol=1e-6)
    assert math.isclose(almostdom.dp_quantile(2.0, 1.0, 2.0 / 3.0), 1.0, rel_tol=1e-12)


def test_errors_are_raised():
    with pytest.raises(almostdom.AlmostDomError):
        almostdom.estimate([1.0, 2.0], [1.0, 2.0])
