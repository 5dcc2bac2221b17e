import math
import os
import subprocess

import pytest

import gapprobe as gp


def test_closed_forms():
    assert gp.eval_u(1.0, 1.0) == pytest.approx(0.6065306597126334236, rel=1e-15)
    assert gp.linear_statistic(1.0, [0.5, 2.0], 3.0) == pytest.approx(0.71191901776552308522, rel=1e-15)
    assert gp.eq5(0.1) == pytest.approx(0.0041420016101053367668, rel=1e-14)
    assert gp.rayleigh_upper_bound(2.0) == pytest.approx(gp.rayleigh_upper_bound(1.0) / 2, rel=1e-12)


def test_variance_routes():
    rot = gp.var_exact_sine(1.0)
    direct = gp.var_exact_sine(1.0, route="direct2d")
    assert rot["value"] == pytest.approx(1 / (2 * math.pi), rel=1e-10)
    assert direct["value"] == pytest.approx(rot["value"], rel=1e-9)
    assert gp.number_variance_exact(1.0)["value"] == pytest.approx(0.4156716124972463171, rel=1e-10)


def test_growth_exponent():
    s = [1.0, 2.0, 4.0]
    slope, _, r2 = gp.growth_exponent(s, [gp.poisson_variance(x) for x in s])
    assert slope == pytest.approx(3.0, abs=1e-12)
    assert r2 == pytest.approx(1.0)


def test_sampling_is_seeded():
    a = gp.sample("sine2", 4.0, replicas=20, seed=3)
    b = gp.sample("sine2", 4.0, replicas=20, seed=3)
    assert a == b
    assert all(abs(x) <= 4.0 for c in a for x in c)
    assert all(c == sorted(c) for c in a)


def test_dyson():
    assert sum(gp.drift([-1.0, 0.0, 2.5])) == pytest.approx(0.0, abs=1e-15)
    times, states = gp.simulate_dyson(3, 0.01, dt=0.001, seed=1)
    assert times[0] == 0.0 and times[-1] == 0.01
    assert all(s[0] < s[1] < s[2] for s in states)


def test_numeric_errors_are_typed():
    with pytest.raises(gp.NumericError):
        gp.sample("sine2", 10.0, n=10)
    with pytest.raises(ValueError):
        gp.eq5(-1.0)


def test_verify_and_cli(tmp_path):
    assert all(c["passed"] for c in gp.verify())
    code, out, _ = gp.run_cli(["--out", str(tmp_path), "rayleigh", "--sigma-max", "4", "--points", "3"])
    assert code == 0
    assert (tmp_path / "rayleigh.csv").read_text().startswith("sigma,var_lb,var_exact")
    assert gp.run_cli(["rayleigh", "--points", "1"])[0] == 64


def test_binary_help():
    binary = os.environ.get("GAP_PROBE_BIN")
    if not binary:
        pytest.skip("GAP_PROBE_BIN not set")
    for cmd in ["verify", "rayleigh", "sample", "hyperuniformity", "dyson"]:
        assert subprocess.run([binary, cmd, "--help"], capture_output=True).returncode == 0
