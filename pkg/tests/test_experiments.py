"""Trajectory experiments: stencil/fit oracles and reduced-size end-to-end runs.

The reduced configurations are calibrated once and frozen:

  * derivative loss on N = 64, k0 in {4, 8}, horizon 0.02: rates
    (1.600, 0.304) and (0.634, 0.0138), slope gap 3.13; the k0 = 8 row
    runs at dt = 1/8^4 (the carrier-phase accuracy cap binds there).
  * two-solution pair on N = 32 (amplitude 0.25, mode-1 bump 1e-3),
    eps = 1e-3, horizon 0.005: refinement ratio 1.086.
  * conservation sweep on N = 32 over eps in {1e-2, 1e-3, 1e-4}: zero
    mass drift, H^4 drifts 0.63 / 0.19 / 0.016 decreasing with eps.
"""

import math

import numpy as np
import pytest

from bo4lab.diagnostics.experiments import (
    bona_smith_convergence,
    centered_diff4,
    conservation_check,
    conservation_sweep,
    derivative_loss_experiment,
    fit_loglog,
    parallel_map,
    two_solution_experiment,
)
from bo4lab.equations import CoefficientSet, SolverParams
from bo4lab.evolve import DiagnosticsSpec, StepperConfig, evolve
from bo4lab.grid import harmonic, make_grid, norm_hs, random_field


# -- numerical helpers --------------------------------------------------------


def test_centered_diff4_exact_on_quartic():
    # the 5-point stencil differentiates polynomials up to degree 4 exactly
    t = np.linspace(0.0, 2.0, 21)
    y = t**4 - 3.0 * t**3 + t
    expected = 4.0 * t**3 - 9.0 * t**2 + 1.0
    got = centered_diff4(y, t[1] - t[0])
    assert got.shape == (len(t) - 4,)
    np.testing.assert_allclose(got, expected[2:-2], rtol=1e-12)


def test_centered_diff4_validation():
    with pytest.raises(ValueError):
        centered_diff4(np.ones(4), 0.1)
    with pytest.raises(ValueError):
        centered_diff4(np.ones(10), 0.0)


def test_fit_loglog_exact_power_law():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    slope, intercept = fit_loglog(x, 3.0 * x**2.5)
    assert slope == pytest.approx(2.5, rel=1e-13)
    assert intercept == pytest.approx(math.log(3.0), rel=1e-12)


def test_fit_loglog_validation():
    with pytest.raises(ValueError):
        fit_loglog([1.0, 2.0], [1.0, -2.0])
    with pytest.raises(ValueError):
        fit_loglog([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        fit_loglog([1.0], [1.0])


def test_parallel_map_order_and_env(monkeypatch):
    items = list(range(17))
    serial = [x * x for x in items]
    monkeypatch.setenv("BO4LAB_THREADS", "1")
    assert parallel_map(lambda x: x * x, items) == serial
    monkeypatch.setenv("BO4LAB_THREADS", "3")
    assert parallel_map(lambda x: x * x, items) == serial
    assert parallel_map(lambda x: x, []) == []


# -- derivative-loss cancellation ----------------------------------------------


@pytest.fixture(scope="module")
def loss_small():
    return derivative_loss_experiment((4, 8), n_points=64, horizon=0.02)


def test_loss_small_passes(loss_small):
    assert loss_small.passed
    assert loss_small.measured == pytest.approx(3.13, abs=0.1)
    assert loss_small.details["slope_naive"] > loss_small.details["slope_corr"]


def test_loss_small_rates_frozen(loss_small):
    rows = {r["k0"]: r for r in loss_small.details["rows"]}
    assert rows[4]["r_naive"] == pytest.approx(1.600, abs=0.01)
    assert rows[4]["r_corr"] == pytest.approx(0.304, abs=0.01)
    assert rows[8]["r_naive"] == pytest.approx(0.634, abs=0.01)
    assert rows[8]["r_corr"] == pytest.approx(0.0138, abs=0.001)


def test_loss_dt_respects_carrier_phase_cap(loss_small):
    # every row obeys dt <= min(beat rule, 1/k0^4); at k0 = 8 the phase cap
    # itself binds (1/4096)
    for row in loss_small.details["rows"]:
        k0 = row["k0"]
        assert row["dt"] <= min(0.74 / (4.0 * k0**3), 1.0 / k0**4) * (1.0 + 1e-12)
    # the stepper rounds dt down so an integer step count lands on the
    # horizon: 0.02 / ceil(0.02 * 8^4)
    rows = {r["k0"]: r for r in loss_small.details["rows"]}
    assert rows[8]["dt"] == pytest.approx(0.02 / 82.0, rel=1e-12)


def test_loss_needs_two_carriers():
    with pytest.raises(ValueError):
        derivative_loss_experiment((4,))


def test_experiment_blowup_reported():
    # an explicit step far outside the stability region destabilizes the
    # run: the report must carry the failure status rather than raise
    grid = make_grid(32)
    u0a = random_field(grid, 3.0, np.random.default_rng(1), amplitude=2.0)
    u0b = u0a + harmonic(grid, 1, 1e-3)
    with np.errstate(all="ignore"):
        report = two_solution_experiment(
            u0a, u0b, 1e-3, 1e-3, horizon=1.0, dt=1e-2, sample_every=1
        )
    assert not report.passed
    assert math.isnan(report.measured)
    assert report.details["status"] == "blowup"


# -- two-solution inequality ----------------------------------------------------


def test_two_solution_identical_pair_saturates():
    grid = make_grid(32)
    u0 = random_field(grid, 3.0, np.random.default_rng(11), amplitude=0.1)
    report = two_solution_experiment(u0, u0, 1e-3, 1e-3, horizon=0.005, sample_every=2)
    assert report.passed
    assert report.measured == 1.0
    assert abs(report.details["base"]["c_star"]) < 1e-12


def test_two_solution_perturbed_pair_stable():
    grid = make_grid(32)
    u0a = random_field(grid, 5.0, np.random.default_rng(11), amplitude=0.25)
    u0b = u0a + harmonic(grid, 1, 1e-3)
    report = two_solution_experiment(u0a, u0b, 1e-3, 1e-3, horizon=0.005, sample_every=2)
    assert report.passed
    assert report.measured == pytest.approx(1.086, abs=0.05)
    assert report.details["base"]["c_star"] > 0.0


def test_two_solution_validation():
    grid = make_grid(32)
    u0 = harmonic(grid, 1, 0.1)
    with pytest.raises(ValueError):
        two_solution_experiment(u0, u0, 1e-3, 1e-3, s_prime=0.5)
    with pytest.raises(ValueError):
        two_solution_experiment(u0, u0, 1e-3, 1e-3, s0=3.4)


# -- vanishing-viscosity mechanics ----------------------------------------------


def test_bona_smith_validation(grid64):
    u0 = harmonic(grid64, 1, 0.1)
    with pytest.raises(ValueError):
        bona_smith_convergence(u0, eps_list=(0.5, 0.25, 0.125))  # too few
    with pytest.raises(ValueError):
        bona_smith_convergence(u0, eps_list=(0.5, 0.5, 0.25, 0.125))
    with pytest.raises(ValueError):
        bona_smith_convergence(u0, eps_list=(2.0, 0.5, 0.25, 0.125))
    with pytest.raises(ValueError):
        bona_smith_convergence(u0, s=0.5)


def test_bona_smith_reduced_run_mechanics(grid64):
    # the reduced box is outside the asymptotic regime (order ~ 0.97), so
    # only the report plumbing is asserted here; the production-size run is
    # exercised by the acceptance suite
    u0 = random_field(grid64, 4.7, np.random.default_rng(8))
    u0 = (0.1 / norm_hs(u0, 4.0)) * u0
    report = bona_smith_convergence(
        u0, eps_list=tuple(2.0**-j for j in range(4, 9)), horizon=0.02, n_samples=20
    )
    assert report.measured == report.details["l2_order"]
    assert report.details["orders"]["4"] == report.details["l2_order"]
    errs = report.details["errors_alpha=4"]
    assert len(errs) == 4
    assert all(e > 0.0 for e in errs)
    assert errs[0] > errs[-1]  # smaller eps, smaller distance to reference


# -- conservation ------------------------------------------------------------


def test_conservation_check_mass_and_drift(grid64, integrable):
    u0 = random_field(grid64, 3.0, np.random.default_rng(3), amplitude=0.05)
    traj = evolve(
        u0,
        SolverParams(coeffs=integrable, epsilon=1e-3),
        StepperConfig(dt=1e-4, t_end=0.01, sample_every=10),
        DiagnosticsSpec(hs_orders=(4.0,)),
        store_snapshots=False,
    )
    report = conservation_check(traj)
    assert report.passed
    assert report.measured == 0.0
    assert report.details["h4_relative_drift"] > 0.0  # viscosity bites
    assert report.details["status"] == "ok"


def test_conservation_sweep_monotone():
    grid = make_grid(32)
    u0 = random_field(grid, 3.0, np.random.default_rng(3), amplitude=0.05)
    report = conservation_sweep(u0, horizon=0.01, sample_every=5)
    assert report.passed
    assert report.measured == 0.0
    drifts = report.details["h4_relative_drifts"]
    assert drifts[0] > drifts[1] > drifts[2]
    assert report.details["monotone"]
