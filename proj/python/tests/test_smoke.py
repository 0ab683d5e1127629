import math

import numpy as np
import pytest

import pybfcs


def small_problem(sigma=0.0):
    A = pybfcs.gaussian_matrix(80, 120, seed=4)
    x = pybfcs.generate_signal(
        n=120, k=16, seed=5, positive_starts=(10, 40), negative_starts=(70, 100)
    )
    y = pybfcs.measure(A, x, sigma=sigma, seed=6)
    return A, x, y


def test_matrix_and_signal_shapes():
    A = pybfcs.gaussian_matrix(30, 20, seed=1)
    assert A.shape == (30, 20)
    assert np.array_equal(A, pybfcs.gaussian_matrix(30, 20, seed=1))
    x = pybfcs.generate_signal(seed=3)
    assert x.shape == (2000,)
    assert np.count_nonzero(x) == 100
    assert abs(np.linalg.norm(x) - 1.0) < 1e-12


def test_measure_sign_convention():
    y = pybfcs.measure(np.array([[1.0, -1.0]]), np.array([0.5, 0.5]))
    assert y.tolist() == [-1]
    assert pybfcs.sign_vector(np.array([3.2, -0.1, 0.0])).tolist() == [1, -1, -1]


def test_objectives():
    A = np.eye(3)
    y = np.array([1, 1, 1], dtype=np.int8)
    x = np.array([1.0, -2.0, 3.0])
    assert pybfcs.objective_value("l1", A, y, x) == pytest.approx(4.0)
    assert pybfcs.objective_value("l2", A, y, x) == pytest.approx(2.0)
    assert pybfcs.consistency_hamming(y, A, x) == 1
    g = pybfcs.subgradient("l2", np.array([[2.0]]), np.array([1], dtype=np.int8), np.array([-1.0]))
    assert g.tolist() == [-4.0]


def test_projections():
    assert pybfcs.tv(np.array([0.0, 5.0, 0.0])) == 10.0
    assert pybfcs.hard_threshold(np.array([3.0, -1.0, 0.5, 2.0]), 2).tolist() == [3, 0, 0, 2]
    assert np.allclose(pybfcs.tv_prox(np.array([2.0, 0.0]), 0.5), [1.5, 0.5])
    assert np.allclose(pybfcs.project_tv_ball(np.array([2.0, 0.0]), 1.0), [1.5, 0.5])
    assert np.allclose(pybfcs.project_tv_ball(np.array([1.0, 2.0, 3.0]), 0.0), [2, 2, 2])
    assert pybfcs.project_nonneg(np.array([1.0, -2.0, 0.0])).tolist() == [1, 0, 0]
    assert np.allclose(pybfcs.normalize(np.array([3.0, 4.0])), [0.6, 0.8])
    with pytest.raises(pybfcs.DegenerateResult):
        pybfcs.normalize(np.zeros(2))


def test_metrics():
    assert pybfcs.mae(np.array([1.0, 0.0]), np.zeros(2)) == 0.5
    assert pybfcs.per(np.array([1.0, 0.0, -1.0]), np.array([0.5, 0.0, 0.0])) == pytest.approx(1 / 3)
    assert math.isinf(pybfcs.snr_db(np.array([0.6, 0.8]), np.array([0.6, 0.8])))
    m = pybfcs.evaluate_metrics(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert m["age"] == pytest.approx(0.5)
    with pytest.raises(pybfcs.DimensionError):
        pybfcs.mse(np.zeros(2), np.zeros(3))


def test_recover_biht_and_bfcs():
    A, x, y = small_problem(sigma=0.1)
    biht = pybfcs.recover(A, y, algorithm="BIHT", k=16)
    assert abs(np.linalg.norm(biht["x_hat"]) - 1.0) < 1e-12
    assert np.count_nonzero(biht["x_hat"]) <= 16
    assert biht["iterations"] == len(biht["trace"]["objective"])
    assert float(biht["x_hat"] @ x) > 0.3

    bfcs = pybfcs.recover(A, y, algorithm="BFCS", k=16, tau=0.01, epsilon=0.01 * pybfcs.tv(x))
    assert np.count_nonzero(bfcs["x_hat"]) <= 16
    again = pybfcs.recover(A, y, algorithm="BFCS", k=16, tau=0.01, epsilon=0.01 * pybfcs.tv(x))
    assert np.array_equal(bfcs["x_hat"], again["x_hat"])


def test_recover_errors():
    A, x, y = small_problem()
    with pytest.raises(pybfcs.DimensionError):
        pybfcs.recover(A, y[:10], k=4)
    with pytest.raises(ValueError):
        pybfcs.recover(A, y, algorithm="BFCS", k=4)  # epsilon missing
    with pytest.raises(pybfcs.DegenerateResult):
        pybfcs.recover(A, y, objective="l2", k=16)  # zero start never moves


def test_grid_search_and_experiment():
    A, x, y = small_problem(sigma=0.2)
    t = pybfcs.tv(x)
    g = pybfcs.grid_search_bfcs(A, y, x, taus=[0.01], eps_list=[0.005 * t, 0.01 * t], k=16)
    assert g["tau"] == 0.01
    assert g["epsilon"] in (0.005 * t, 0.01 * t)
    assert g["snr_db"] == pytest.approx(pybfcs.snr_db(x, g["result"]["x_hat"]))

    config = {
        "n": 120,
        "m": 80,
        "K_list": [16],
        "sigma_list": [1.0],
        "trials": 2,
        "base_seed": 3,
        "signal": {"positive_starts": [10, 40], "negative_starts": [70, 100]},
        "bfcs_grid": {"tau": [0.01], "eps_factor": [0.5, 1.0]},
    }
    report = pybfcs.run_experiment(config)
    assert len(report["rows"]) == 8
    assert len(report["aggregates"]) == 4
    parallel = pybfcs.run_experiment(config, jobs=2)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "wall_time"} for r in rows]
    assert strip(report["rows"]) == strip(parallel["rows"])
