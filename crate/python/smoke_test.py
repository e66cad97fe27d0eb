"""Smoke test for the pymcurve extension.

Build and install first:  pip install --no-build-isolation ./crates/python
Then run:                 python -m pytest python/smoke_test.py
"""

import math

import pytest

import pymcurve


def test_euler_spiral_curvature_is_affine():
    eq = pymcurve.named_curve("euler", 1.0)
    assert eq.alpha == -1.0
    assert eq.s_max_domain == pytest.approx(1.0)
    assert eq.curvature(0.5) == pytest.approx(0.5, abs=1e-15)
    c = eq.sample(0.9, 101)
    assert len(c["s"]) == 101
    assert c["kappa"][-1] == pytest.approx(0.1, abs=1e-12)


def test_domain_error_is_raised():
    eq = pymcurve.NaturalEquation(-1.0, 1.0)
    with pytest.raises(pymcurve.McurveError):
        eq.curvature(2.0)
    with pytest.raises(ValueError):
        pymcurve.named_curve("spiral", 1.0)


def test_lcg_slope_and_monotonicity():
    eq = pymcurve.NaturalEquation(2.0, 1.0)
    c = eq.sample(5.0, 400)
    assert pymcurve.lcg(c["s"], c["kappa"])["slope"] == pytest.approx(2.0, abs=1e-3)
    report = pymcurve.check_monotone(c["s"], c["kappa"])
    assert report["is_monotone"] and report["direction"] == "decreasing"
    s = [10.0 * i / 999 for i in range(1000)]
    assert not pymcurve.check_monotone(s, [math.sin(v) for v in s])["is_monotone"]


def test_fit_hits_the_end_point():
    dt, psi = 1.2, 0.72
    end = (math.cos(psi), math.sin(psi))
    fit = pymcurve.fit_g1((0.0, 0.0), end, 0.0, dt, 1.0)
    assert fit["residual"] < 1e-10
    curve = fit["curve"]
    assert math.hypot(curve["x"][-1] - end[0], curve["y"][-1] - end[1]) < 1e-8
    region = pymcurve.drawable_region(1.0, dt)
    assert region["psi_min"] <= psi <= region["psi_max"]


def test_identity_quaternion_curve_is_a_line():
    rows = pymcurve.qi_sample([(1.0, 0.0, 0.0, 0.0)], [1.0, 2.0, 3.0], [0.0, 0.6, 0.8], 5.0, 11)
    for s, p, t in rows:
        assert p == pytest.approx([1.0, 2.0 + 0.6 * s, 3.0 + 0.8 * s], abs=1e-12)
        assert t == pytest.approx([0.0, 0.6, 0.8])
