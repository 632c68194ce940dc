import math

import numpy as np
import pytest

import cgd_opt


def test_registry():
    names = cgd_opt.function_names()
    assert len(names) == 9
    assert "matyas" in names
    assert cgd_opt.table1_row("matyas")["alpha"] == 0.01
    assert cgd_opt.table1_row("zakharov") is None


def test_values_and_gradients():
    x = np.array([math.pi, 2.275])
    assert cgd_opt.value("branin", x) == pytest.approx(0.397887, rel=1e-6)
    assert np.linalg.norm(cgd_opt.gradient("branin", x)) < 1e-12
    assert cgd_opt.fd_gradient_check("branin", x, 1e-6) <= 1e-5
    h = cgd_opt.hessian("matyas", np.zeros(2))
    assert np.allclose(h, [[0.52, -0.48], [-0.48, 0.52]])


def test_penalty():
    # Matyas at (1, 0): f = 0.26, grad = (0.52, -0.48)
    x = np.array([1.0, 0.0])
    g = np.array([0.52, -0.48])
    assert cgd_opt.penalized_value("matyas", x, 0.5) == pytest.approx(0.26 + 0.5 * g @ g)
    h = np.array([[0.52, -0.48], [-0.48, 0.52]])
    assert np.allclose(cgd_opt.penalized_gradient("matyas", x, 0.5), g + h @ g)


def test_schedule():
    s = cgd_opt.lambda_schedule("0.01:0.1", 40)
    assert s[0] == 0.01 and s[-1] == 0.1
    assert cgd_opt.lambda_schedule(0.4, 3) == [0.4, 0.4, 0.4]


def test_optimize_and_budget():
    t = cgd_opt.optimize("quadratic", "cgd-fd", alpha=0.01, lambda_=0.4, iters=40)
    assert t.grad_evals <= 40
    assert t.terminated_by == "budget"
    assert t.records[0].direction == "cgd"
    gd = cgd_opt.optimize("quadratic", "gd", alpha=0.01, iters=40)
    assert t.f[1] < gd.f[1]


def test_zero_lambda_matches_gd():
    gd = cgd_opt.optimize("branin", "gd", alpha=0.01, iters=20, seed=4)
    cgd = cgd_opt.optimize("branin", "cgd", alpha=0.01, lambda_=0.0, iters=20, seed=4)
    for a, b in zip(gd.records, cgd.records):
        assert np.array_equal(a.x, b.x)


def test_errors():
    with pytest.raises(cgd_opt.InputError):
        cgd_opt.optimize("nope", "gd")
    with pytest.raises(cgd_opt.CapabilityError):
        cgd_opt.optimize("drop-wave", "cgd")


def test_quasi_newton_updates():
    g, applied = cgd_opt.qn_inverse_update(np.eye(2), np.array([1.0, 0.0]),
                                           np.array([2.0, 0.0]), "bfgs")
    assert applied
    assert np.allclose(g, [[0.5, 0.0], [0.0, 1.0]])
    _, applied = cgd_opt.qn_hessian_update(np.eye(2), np.array([1.0, 0.0]),
                                           np.array([0.0, 1.0]), "dfp")
    assert not applied


def test_analysis():
    e = cgd_opt.theorem1_envelope(4.0, 2.0, 0.4)
    assert e["alpha_max"] == pytest.approx(2 / 70.56)
    r = cgd_opt.quadratic_rate(2.0, 4.0, 0.4)
    assert r["factor"] == pytest.approx(0.527273, rel=1e-6)
    assert cgd_opt.classify_stationary("levy", np.ones(2), 1.0) == "true_stationary"


def test_suites(tmp_path):
    rows = cgd_opt.table1_suite("0..4", tmp_path)
    assert len(rows) == 6
    assert (tmp_path / "table1.csv").exists()
    medians = cgd_opt.qn_suite("0..2")
    assert len(medians) == 12
    assert cgd_opt.check_function("griewank", 10)
