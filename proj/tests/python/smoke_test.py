"""Smoke tests for the python module against known values."""

import math
import os
import tempfile

import plbench


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def test_scalars():
    assert plbench.psi(1.0, 0.0) == 0.0
    assert approx(plbench.psi(1.0, 2.0), 1.96875)
    assert plbench.psi_grad(1.0, 1.0) == 0.0
    assert approx(plbench.iota(2), 1.0)
    assert approx(plbench.iota(3), 1.0 / 3.0)
    assert plbench.default_round_count(1, 1.0) == 14


def test_chain():
    chain = plbench.Chain(2, 2)
    assert chain.dim == 4
    assert approx(chain.value([0.0] * 4), 2.210449218750)
    assert chain.value(chain.target) == 0.0
    x = [0.1, -0.2, 0.3, 0.0]
    assert approx(chain.q1(x) + chain.q2(x) + chain.r(x), chain.value(x), 1e-10)
    grad = chain.grad([0.0] * 4)
    assert len(grad) == 4


def test_spectral():
    out = plbench.spectral("linear:32")
    expected = (1 - math.cos(math.pi / 32)) / (1 + math.cos(math.pi / 32))
    assert approx(out["gamma"], expected, 1e-10)
    assert out["all_pass"]
    built = plbench.mixing_for_gap(0.0024)
    assert built["n"] == 32
    assert abs(built["gap"] - 0.0024) <= 1e-8


def test_params():
    params = plbench.drone_default_params(4, 10.0, 1.0, 0.5, 1.0, 1e-6)
    assert approx(params["p"], 1.0 / 3.0)
    assert params["b"] == 2


CONFIG = """
[problem]
preset = theorem2
n = 4
L = 1.0
mu = 0.1
delta = 1.0

[solver]
name = gd
eta = 0.5
iterations = 50

[run]
epsilon = 1e-8
seed = 1
"""


def test_run_and_check():
    with tempfile.TemporaryDirectory() as tmp:
        out = plbench.run_experiment(CONFIG, os.path.join(tmp, "a"))
        assert "reached_eps=1" in out["summary"]
        assert out["solvers"][0]["final_gap"] <= 1e-8
        again = plbench.run_experiment(CONFIG, os.path.join(tmp, "b"))
        with open(out["solvers"][0]["csv"], "rb") as f1, open(
            again["solvers"][0]["csv"], "rb"
        ) as f2:
            assert f1.read() == f2.read()
        svg = os.path.join(tmp, "curve.svg")
        plbench.plot([out["solvers"][0]["csv"]], "lfo_total", svg)
        with open(svg) as f:
            assert f.read().startswith("<svg")

    passed, text = plbench.check_instance("[problem]\npreset = theorem2\n")
    assert passed, text


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
