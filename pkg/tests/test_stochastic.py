import csv
import math
from dataclasses import replace

import numpy as np
import pytest

from polariton_optomech.gaussian import (
    BathSpec,
    UnstableModelError,
    build_three_mode,
    build_two_mode,
    pair_log_negativity,
    solve_lyapunov,
)
from polariton_optomech.stochastic import SimConfig, exact_step, simulate

SMALL = SimConfig(dt=0.05, burn_in=10.0, sample_window=40.0, n_trajectories=100, seed=7)


def upper(a):
    return a[np.triu_indices(a.shape[0])]


def test_exact_step_satisfies_stationary_identity():
    model = build_three_mode(1.0, 3.0, 1.0, BathSpec(0.2, 0.1), variant="a1_a2")
    V = solve_lyapunov(model).v
    for h in (0.01, 0.3, 2.0):
        F, Q = exact_step(model.drift, model.diffusion, h)
        np.testing.assert_allclose(Q, V - F @ V @ F.T, atol=1e-12)


def test_exact_step_small_h_limit():
    model = build_two_mode(1.0, 1.0, BathSpec(0.5))
    F, Q = exact_step(model.drift, model.diffusion, 1e-6)
    np.testing.assert_allclose(Q / 1e-6, model.diffusion, atol=1e-5)


def test_free_thermal_mode_variance():
    model = build_two_mode(0.0, 1.0, BathSpec(0.8))
    est = simulate(model, SimConfig())
    for i in (0, 1):
        assert abs(est.cov.v[i, i] - 1.3) < 3 * est.stderr[i, i]


def test_two_mode_vacuum_bath_all_entries():
    model = build_two_mode(1.0, 1.0, BathSpec(0.0))
    est = simulate(model, SimConfig())
    z = est.z_scores(solve_lyapunov(model))
    assert np.all(np.abs(upper(z)) < 3.0), upper(z)


def test_a1_a2_log_negativity():
    model = build_three_mode(1.0, 3.0, 1.0, BathSpec(0.2), variant="a1_a2")
    est = simulate(model, SimConfig())
    value, se = est.pair_log_negativity("A2", "b")
    exact = pair_log_negativity(solve_lyapunov(model), "A2", "b")
    assert value > 0
    assert abs(value - exact) < 3 * se


def test_squeezed_bath_cross_terms():
    model = build_two_mode(0.0, 1.0, BathSpec(0.5, 0.3 + 0.4j))
    est = simulate(model, SimConfig(n_trajectories=200))
    z = est.z_scores(solve_lyapunov(model))
    assert np.all(np.abs(upper(z)) < 3.0)
    # the off-diagonal mechanical entry is 2 Im m / 2 = 0.4
    assert est.cov.v[0, 1] == pytest.approx(0.4, abs=4 * est.stderr[0, 1])


def test_reproducible_and_chunk_independent():
    model = build_two_mode(1.0, 1.0, BathSpec(0.3))
    a = simulate(model, SMALL)
    b = simulate(model, SMALL)
    c = simulate(model, SMALL, chunk_size=7)
    assert np.array_equal(a.cov.v, b.cov.v)
    assert np.array_equal(a.samples, c.samples)
    d = simulate(model, replace(SMALL, seed=8))
    assert not np.array_equal(a.cov.v, d.cov.v)


def test_dt_refinement_shares_paths_and_moves_less_than_one_se():
    model = build_two_mode(1.0, 1.0, BathSpec(0.3))
    cfg = SimConfig(n_trajectories=100)
    coarse = simulate(model, cfg)
    fine = simulate(model, replace(cfg, dt=cfg.dt / 2))
    assert np.all(np.abs(fine.cov.v - coarse.cov.v) < coarse.stderr)


def test_trajectory_streams_do_not_depend_on_ensemble_size():
    model = build_two_mode(0.5, 1.0, BathSpec(0.1))
    a = simulate(model, SMALL)
    b = simulate(model, replace(SMALL, n_trajectories=150))
    np.testing.assert_array_equal(a.samples, b.samples[:100])


@pytest.mark.parametrize("kw", [dict(n_trajectories=99), dict(dt=0.0), dict(sample_window=0.0), dict(seed=-1)])
def test_invalid_config(kw):
    with pytest.raises(ValueError):
        SimConfig(**kw)


def test_step_too_coarse_for_model():
    model = build_three_mode(1.0, 10.0, variant="a1_a2")
    with pytest.raises(ValueError, match="rho"):
        simulate(model, SimConfig(dt=0.05))


def test_unstable_model_rejected():
    with pytest.raises(UnstableModelError):
        simulate(build_two_mode(2.5), SMALL)


def test_csv_export(tmp_path):
    est = simulate(build_two_mode(1.0), SMALL)
    path = tmp_path / "m.csv"
    est.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# dt=0.05")
    rows = list(csv.DictReader(lines[1:]))
    assert len(rows) == 10
    assert float(rows[0]["estimate"]) == est.cov.v[0, 0]
    assert rows[1]["row"] == "b_q" and rows[1]["col"] == "b_p"
