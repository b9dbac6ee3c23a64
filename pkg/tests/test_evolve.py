"""Time stepping: phi functions, exact linear flow, order, reversibility.

Scenario calibration (frozen values, N=32, integrable coefficients,
amplitude-0.05 decay-3 field, seed 0, horizon 0.01 unless noted):

  * ETDRK4 self-convergence against an 8000-step integrating-factor
    reference gives observed temporal order 3.800 over n in {125..1000}.
  * forward/backward round trip at dt = 2e-5 returns within 5.6e-10.
  * the two schemes agree to 1.5e-10 at dt = 1e-5 over horizon 0.005.

The linear flow moves each harmonic k rigidly at speed k^3, so mode 1
translates by t and mode 2 by 8t; the propagator is exact there.
"""

import math

import numpy as np
import pytest

from bo4lab.energy import EnergyParams, energy_hs
from bo4lab.equations import CoefficientSet, SolverParams
from bo4lab.evolve import (
    BlowUpError,
    DiagnosticsSpec,
    StepperConfig,
    auto_dt,
    evolve,
    linear_symbol,
    phi1,
    phi2,
    phi3,
    step,
    suggest_dt,
)
from bo4lab.grid import (
    ConfigError,
    Field,
    harmonic,
    make_grid,
    norm_l2,
    random_field,
    translate,
)


# -- phi functions ----------------------------------------------------------


def test_phi_values_at_zero():
    assert phi1(0.0) == 1.0
    assert phi2(0.0) == 0.5
    assert phi3(0.0) == pytest.approx(1.0 / 6.0, rel=1e-15)


def test_phi_closed_form_moderate_z():
    z = 2.0
    assert math.isclose(phi1(z).real, (math.e**2 - 1.0) / 2.0, rel_tol=1e-14)
    assert math.isclose(phi2(z).real, (math.e**2 - 3.0) / 4.0, rel_tol=1e-13)


def test_phi_small_z_series_accuracy():
    # direct evaluation of (e^z - 1 - z - z^2/2)/z^3 at z = 1e-4 would lose
    # ~4 digits to cancellation; the series must stay at machine accuracy
    z = 1e-4
    expected = 1.0 / 6.0 + z / 24.0 + z * z / 120.0
    assert math.isclose(phi3(z).real, expected, rel_tol=1e-13)


@pytest.mark.parametrize("r", [0.4, 0.5, 0.7])
@pytest.mark.parametrize("phase", [1.0, 1j, (1.0 + 1j) / math.sqrt(2.0), -1.0])
def test_phi_recurrence_across_series_seam(r, phase):
    # phi_{n+1}(z) = (phi_n(z) - 1/n!)/z ties the series branch (|z| < 0.5)
    # to the closed forms on the other side of the switch radius
    z = r * phase
    assert phi2(z) == pytest.approx((phi1(z) - 1.0) / z, rel=1e-12)
    assert phi3(z) == pytest.approx((phi2(z) - 0.5) / z, rel=1e-12)


def test_phi_imaginary_axis_bounded():
    # |phi1(iy)| = |2 sin(y/2) / y| <= 1: the dispersive weights never amplify
    y = np.linspace(-40.0, 40.0, 401)
    assert np.all(np.abs(phi1(1j * y)) <= 1.0 + 1e-15)


def test_phi_vectorized_matches_scalar():
    z = np.array([1e-6, 0.3j, 2.0 + 1.0j, -4.0])
    for fn in (phi1, phi2, phi3):
        vec = fn(z)
        assert vec.shape == z.shape
        for j, zj in enumerate(z):
            assert vec[j] == fn(complex(zj))


def test_linear_symbol_values():
    assert linear_symbol(2.0) == -16j
    assert linear_symbol(-2.0) == 16j
    assert linear_symbol(0.0) == 0.0
    assert linear_symbol(2.0, epsilon=0.1) == -16j - 1.6
    assert linear_symbol(2.0, epsilon=0.1, time_direction=-1) == -16j + 1.6


# -- configuration ----------------------------------------------------------


def test_stepper_config_validation():
    with pytest.raises(ConfigError):
        StepperConfig(dt=0.0)
    with pytest.raises(ConfigError):
        StepperConfig(t_end=0.0)
    with pytest.raises(ConfigError):
        StepperConfig(sample_every=0)
    with pytest.raises(ConfigError):
        StepperConfig(scheme="rk4")


def test_single_step_needs_explicit_dt(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero())
    with pytest.raises(ConfigError):
        step(harmonic(grid64, 1), params, StepperConfig(dt=None, t_end=1.0))


def test_auto_dt_includes_dissipative_bound(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero(), epsilon=0.01)
    k = float(grid64.k_max)
    assert auto_dt(grid64, params, harmonic(grid64, 1)) == pytest.approx(0.5 / (0.01 * k**4))


def test_suggest_dt_linear_is_advective_bound(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero())
    assert suggest_dt(grid64, params, harmonic(grid64, 1)) == pytest.approx(1.0 / grid64.k_max)


def test_suggest_dt_shrinks_with_amplitude(grid64, integrable):
    params = SolverParams(coeffs=integrable)
    small = suggest_dt(grid64, params, harmonic(grid64, 1, 0.1))
    large = suggest_dt(grid64, params, harmonic(grid64, 1, 10.0))
    assert large < small


# -- exact linear flow ------------------------------------------------------


def test_linear_flow_translates_mode_one(grid64):
    # the k=1 harmonic moves rigidly at unit speed
    params = SolverParams(coeffs=CoefficientSet.zero())
    u0 = harmonic(grid64, 1)
    traj = evolve(u0, params, StepperConfig(dt=0.01, t_end=1.0, sample_every=100))
    assert norm_l2(traj.snapshots[-1] - translate(u0, 1.0)) < 1e-13


def test_linear_flow_translates_mode_two_faster(grid64):
    # mode 2 moves at speed 2^3 = 8
    params = SolverParams(coeffs=CoefficientSet.zero())
    u0 = harmonic(grid64, 2)
    traj = evolve(u0, params, StepperConfig(dt=0.01, t_end=1.0, sample_every=100))
    assert norm_l2(traj.snapshots[-1] - translate(u0, 8.0)) < 1e-13


def test_linear_viscous_decay_exact(grid64):
    # zero coefficients + epsilon: mode k decays by exp(-eps k^4 t) exactly
    eps, t = 0.01, 0.1
    params = SolverParams(coeffs=CoefficientSet.zero(), epsilon=eps)
    u0 = harmonic(grid64, 3)
    traj = evolve(u0, params, StepperConfig(dt=0.02, t_end=t, sample_every=5))
    final = traj.snapshots[-1]
    assert abs(final.spectrum[3]) == pytest.approx(0.5 * math.exp(-eps * 81.0 * t), rel=1e-13)


def test_linear_backward_roundtrip_exact(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero())
    back = SolverParams(coeffs=CoefficientSet.zero(), time_direction=-1)
    u0 = harmonic(grid64, 5) + harmonic(grid64, 2, 0.3)
    cfg = StepperConfig(dt=0.05, t_end=0.5, sample_every=10)
    fwd = evolve(u0, params, cfg).snapshots[-1]
    ret = evolve(fwd, back, cfg).snapshots[-1]
    assert norm_l2(ret - u0) < 1e-13


# -- nonlinear accuracy -----------------------------------------------------


@pytest.fixture(scope="module")
def small_state():
    grid = make_grid(32)
    u0 = random_field(grid, 3.0, np.random.default_rng(0), amplitude=0.05)
    return grid, u0


def test_temporal_order_four(small_state, integrable):
    _, u0 = small_state
    params = SolverParams(coeffs=integrable)
    horizon = 0.01
    ref = evolve(
        u0, params, StepperConfig(dt=horizon / 8000, t_end=horizon, sample_every=8000, scheme="ifrk4")
    ).snapshots[-1]
    steps = [125, 250, 500, 1000]
    errs = [
        norm_l2(
            evolve(u0, params, StepperConfig(dt=horizon / n, t_end=horizon, sample_every=n)).snapshots[-1]
            - ref
        )
        for n in steps
    ]
    order = np.polyfit(np.log([horizon / n for n in steps]), np.log(errs), 1)[0]
    assert 3.5 < order < 4.2  # measured 3.800


def test_forward_backward_roundtrip(small_state, integrable):
    _, u0 = small_state
    fwd_p = SolverParams(coeffs=integrable)
    back_p = SolverParams(coeffs=integrable, time_direction=-1)
    cfg = StepperConfig(dt=2e-5, t_end=0.01, sample_every=500)
    fwd = evolve(u0, fwd_p, cfg).snapshots[-1]
    ret = evolve(fwd, back_p, cfg).snapshots[-1]
    assert norm_l2(ret - u0) < 1e-8  # measured 5.6e-10


def test_schemes_agree(small_state, integrable):
    _, u0 = small_state
    params = SolverParams(coeffs=integrable)
    a = evolve(u0, params, StepperConfig(dt=1e-5, t_end=0.005, sample_every=500)).snapshots[-1]
    b = evolve(u0, params, StepperConfig(dt=1e-5, t_end=0.005, sample_every=500, scheme="ifrk4")).snapshots[-1]
    assert norm_l2(a - b) < 1e-8  # measured 1.5e-10


def test_mass_exactly_conserved(small_state, integrable):
    _, u0 = small_state
    params = SolverParams(coeffs=integrable, epsilon=1e-3)
    traj = evolve(u0, params, StepperConfig(dt=1e-4, t_end=0.01, sample_every=10), store_snapshots=False)
    mass = traj.diagnostics["mass"]
    assert np.all(mass == mass[0])


# -- trajectory bookkeeping -------------------------------------------------


def test_dt_rounds_to_divide_horizon(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero())
    traj = evolve(harmonic(grid64, 1), params, StepperConfig(dt=0.3, t_end=1.0))
    assert traj.dt == pytest.approx(0.25)
    assert traj.times[-1] == pytest.approx(1.0)


def test_sampling_stride_and_extras(grid64):
    params = SolverParams(coeffs=CoefficientSet.zero())
    cfg = StepperConfig(dt=0.1, t_end=1.0, sample_every=4)
    traj = evolve(
        harmonic(grid64, 1),
        params,
        cfg,
        sample_fn=lambda t, f: {"amp": float(np.max(np.abs(f.values)))},
        store_snapshots=False,
    )
    np.testing.assert_allclose(traj.times, [0.0, 0.4, 0.8, 1.0], atol=1e-12)
    assert traj.snapshots == []
    assert len(traj.diagnostics["amp"]) == 4


def test_diagnostics_columns(grid64, integrable):
    params = SolverParams(coeffs=integrable)
    eparams = EnergyParams(s=2.0, s0=3.6, cs=2.0, c0=2.0)
    u0 = harmonic(grid64, 1, 0.1)
    traj = evolve(
        u0,
        params,
        StepperConfig(dt=1e-4, t_end=1e-3, sample_every=2),
        DiagnosticsSpec(hs_orders=(2.0,), energy=eparams),
        store_snapshots=False,
    )
    assert set(traj.diagnostics) >= {"mass", "l2", "hs_2", "E_s", "E_l2"}
    assert traj.diagnostics["E_s"][0] == pytest.approx(
        energy_hs(u0, Field.zero(grid64), eparams, integrable), rel=1e-14
    )


# -- blow-up handling -------------------------------------------------------


def test_blowup_detected_and_truncates(grid64, integrable):
    # amplitude 10 with a 1e-2 step is far outside the stability region
    params = SolverParams(coeffs=integrable)
    u0 = harmonic(grid64, 1, 10.0)
    with np.errstate(all="ignore"):
        traj = evolve(u0, params, StepperConfig(dt=1e-2, t_end=0.5, sample_every=1), store_snapshots=False)
    assert traj.status == "blowup"
    assert traj.blowup_time is not None
    assert traj.times[-1] < 0.5


def test_single_step_blowup_raises(grid64, integrable):
    params = SolverParams(coeffs=integrable)
    u0 = harmonic(grid64, 1, 100.0)
    with np.errstate(all="ignore"), pytest.raises(BlowUpError):
        u = u0
        for _ in range(50):
            u = step(u, params, StepperConfig(dt=1e-2, t_end=1.0))


def test_nonfinite_initial_state_rejected(grid64):
    spec = np.zeros(grid64.spectrum_size, dtype=complex)
    spec[1] = np.inf
    params = SolverParams(coeffs=CoefficientSet.zero())
    with pytest.raises(ConfigError):
        evolve(Field(grid64, spectrum=spec), params, StepperConfig(dt=0.1, t_end=1.0))
