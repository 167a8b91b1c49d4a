import math

import pytest

import lnlab


def test_cone_basics():
    assert lnlab.sigma_k([1.0, 2.0, 3.0], 2) == pytest.approx(11.0)
    assert lnlab.mu_plus(4, 2) == pytest.approx(1.0)
    assert lnlab.mu_plus(3, 3, 0.5) == pytest.approx(1.0)
    assert lnlab.contains_ray_e1(3, 1)
    assert not lnlab.contains_ray_e1(4, 2)
    inside, margin = lnlab.in_cone([-1.0, 2.0, 2.0, 2.0], 2)
    assert inside and margin > 0
    assert not lnlab.in_cone([-1.0, 2.0, 2.0, 2.0], 3)[0]
    assert lnlab.f_eval([-1.0, 2.0, 2.0, 2.0], 2) == pytest.approx(1.0)
    assert lnlab.grad_f([1.0] * 5, 3) == pytest.approx([0.2] * 5)
    assert lnlab.tau_deform([1.0, 0.0, 0.0], 0.5) == [1.0, 0.5, 0.5]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        lnlab.mu_plus(4, 7)
    with pytest.raises(lnlab.LnlabError):
        lnlab.f_eval([-1.0, 2.0, 2.0, 2.0], 3)


def test_hyperbolic_spectrum():
    r = 0.4
    radial, tangential = lnlab.radial_schouten_spectrum(0.5 * (1 - r * r), -r, -1.0, r, 4)
    assert radial == pytest.approx(0.5)
    assert tangential == pytest.approx(0.5)


def test_solve_threshold_case():
    rep = lnlab.solve(4, 2, 0.95, delta=0.05, grid=400)
    assert rep["converged"]
    assert rep["residual_sup"] <= 1e-10
    assert rep["admissibility_margin_min"] > 0
    R = 0.05 + math.sqrt(0.05 ** 2 + 1)
    assert rep["profile"]["u"][0] == pytest.approx(R / 2, abs=1e-9)


def test_delta_sweep_and_certificate():
    sweep = lnlab.delta_sweep(3, 1, 0.9, [0.1, 0.01, 0.001], grid=400)
    assert sweep["completed"]
    assert not sweep["violations"]
    assert abs(sweep["legs"][-1]["boundary_slope"] - 1) < 0.01
    cert = lnlab.certify_scan([i / 20 for i in range(21)], 4, 2)
    assert cert["valid"] and cert["verification"]["ok"]


def test_verify_subset():
    results = lnlab.verify(["mu", "barrier"])
    assert [r["id"] for r in results] == [2, 3]
    assert all(r["passed"] for r in results)
