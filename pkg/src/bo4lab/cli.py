"""Command-line entry point.

``bo4lab <command> --config <file> [--out <dir>] [--seed <int>]``

Every command parses the same plain-text config format, runs one catalog of
checks or one experiment, writes ``report.json`` (plus trajectory artifacts
for ``evolve``) into the output directory, prints one PASS/FAIL line per
check, and exits 0 iff everything passed.  Identical (config, seed) pairs
produce byte-identical outputs.  ``BO4LAB_THREADS`` caps worker count for
the parallel experiments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import COMMANDS, RunConfig, parse_config, with_cli_overrides
from .diagnostics import (
    COMMUTATOR_KINDS,
    IDENTITY_IDS,
    INEQUALITY_IDS,
    CheckReport,
    SymbolScanSpec,
    bona_smith_convergence,
    check_commutator_stability,
    check_identity,
    conservation_check,
    conservation_sweep,
    derivative_loss_experiment,
    gn_check,
    mollifier_contraction_check,
    mollifier_rate_check,
    mollifier_smoothing_check,
    symbol_scan,
    two_solution_experiment,
)
from .diagnostics.symbols import SymbolScanError
from .energy import EnergyParams, choose_big_constant
from .equations import SolverParams
from .evolve import BlowUpError, DiagnosticsSpec, StepperConfig, Trajectory, evolve, suggest_dt
from .grid import ConfigError, Field, TorusGrid, harmonic, norm_hs, random_field
from .outputs import write_run_outputs

__all__ = ["main", "run_command"]

#: Grids for the exact-identity catalog (integration-by-parts identities
#: hold to rounding at any resolution; three sizes guard against aliasing).
_IDENTITY_GRID_SIZES = (64, 128, 256)

#: Sobolev orders swept by the symbol and commutator catalogs.
_SYMBOL_ORDERS = (0.0, 1.0, 2.0, 2.5, 3.7)
_COMMUTATOR_ORDERS = (0.0, 2.0, 4.0)

#: (l, p) exponent pairs for the interpolation-inequality catalog.
_GN_CASES = ((0, 2.0), (0, float("inf")), (1, 2.0), (1, float("inf")), (2, 4.0), (3, 2.0))


def _initial_field(cfg: RunConfig) -> Field:
    grid = TorusGrid(cfg.n)
    if cfg.ic == "harmonic":
        return harmonic(grid, cfg.mode, cfg.amplitude)
    return random_field(grid, cfg.decay, cfg.seed, amplitude=cfg.amplitude)


def _energy_params(cfg: RunConfig, f: Field, g: Field, s: float) -> EnergyParams:
    return EnergyParams(
        s=s,
        s0=cfg.s0,
        cs=choose_big_constant(f, g, cfg.coeffs, s=s),
        c0=choose_big_constant(f, g, cfg.coeffs),
    )


# -- command handlers ------------------------------------------------------------
# each returns (reports, trajectory-or-None)


def _run_evolve(cfg: RunConfig) -> tuple[list[CheckReport], Trajectory | None]:
    u0 = _initial_field(cfg)
    params = SolverParams(coeffs=cfg.coeffs, epsilon=cfg.epsilon)
    dt = cfg.dt if cfg.dt is not None else suggest_dt(u0.grid, params, u0)
    t_end = cfg.t_end if cfg.t_end is not None else 1.0
    diag = DiagnosticsSpec(
        hs_orders=(cfg.s,),
        energy=_energy_params(cfg, u0, Field.zero(u0.grid), cfg.s),
    )
    step_cfg = StepperConfig(
        dt=dt, t_end=t_end, sample_every=cfg.sample_every, scheme=cfg.scheme
    )
    traj = evolve(u0, params, step_cfg, diagnostics=diag)
    return [conservation_check(traj)], traj


def _run_identities(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    reports = []
    for n in _IDENTITY_GRID_SIZES:
        grid = TorusGrid(n)
        # one seeded corpus per grid; identities are exact for trig polynomials
        fields = [
            random_field(grid, cfg.decay, cfg.seed + i, amplitude=cfg.amplitude)
            for i in range(3)
        ]
        for identity in IDENTITY_IDS:
            arity = 3 if identity == "fourth_order_triple" else 2
            r = check_identity(identity, fields[:arity], s=cfg.s)
            reports.append(
                CheckReport(
                    name=f"{r.name}:n={n}",
                    passed=r.passed,
                    measured=r.measured,
                    bound=r.bound,
                    details=r.details,
                )
            )
    return reports, None


def _run_commutators(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    # corpus decay stays at the check's heavy-tail default: the bound's norms
    # must have continuum limits for the stability ratio to test the lemma
    reports = [
        check_commutator_stability(kind, s, cfg.s0, seed=cfg.seed)
        for kind in COMMUTATOR_KINDS
        for s in _COMMUTATOR_ORDERS
    ]
    return reports, None


def _run_symbols(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    reports = [
        symbol_scan(SymbolScanSpec(ineq, s, box=cfg.box, fit_radius=cfg.fit_radius))
        for ineq in INEQUALITY_IDS
        for s in _SYMBOL_ORDERS
    ]
    return reports, None


def _run_gn(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    grid = TorusGrid(cfg.n)
    reports = []
    for i in range(4):
        f = random_field(grid, cfg.decay, cfg.seed + i, amplitude=cfg.amplitude)
        for l, p in _GN_CASES:
            if l <= cfg.s - 1.0:
                reports.append(gn_check(f, l, p, cfg.s))
    return reports, None


def _run_mollifier(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    f = _initial_field(cfg)
    return [
        mollifier_rate_check(f, cfg.s, cfg.alpha),
        mollifier_contraction_check(f, cfg.s, cfg.alpha),
        mollifier_smoothing_check(f, cfg.s, cfg.alpha),
    ], None


def _run_loss(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    report = derivative_loss_experiment(
        cfg.k0_list,
        s=cfg.s,
        s0=cfg.s0,
        coeffs=cfg.coeffs,
        epsilon=cfg.epsilon,
        scheme=cfg.scheme,
    )
    return [report], None


def _run_two_solution(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    u0_a = _initial_field(cfg)
    u0_b = u0_a + harmonic(u0_a.grid, 1, cfg.perturbation)
    eps1, eps2 = cfg.epsilon_pair
    report = two_solution_experiment(
        u0_a,
        u0_b,
        eps1,
        eps2,
        s_prime=cfg.s_prime,
        s0=cfg.s0,
        coeffs=cfg.coeffs,
        horizon=cfg.t_end if cfg.t_end is not None else 0.1,
        dt=cfg.dt,
        sample_every=cfg.sample_every,
        scheme=cfg.scheme,
    )
    return [report], None


def _run_bona_smith(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    u0 = _initial_field(cfg)
    # normalize the data so runs are comparable across seeds and decays
    scale = norm_hs(u0, cfg.s)
    if scale > 0.0:
        u0 = u0 * (cfg.amplitude / scale)
    kwargs = dict(
        s=cfg.s,
        s0=cfg.s0,
        coeffs=cfg.coeffs,
        horizon=cfg.t_end if cfg.t_end is not None else 0.1,
        dt=cfg.dt,
        scheme=cfg.scheme,
        alphas=(cfg.alpha,) if cfg.alpha > 0.0 else None,
    )
    if cfg.eps_list is not None:
        kwargs["eps_list"] = cfg.eps_list
    return [bona_smith_convergence(u0, **kwargs)], None


def _run_conserve(cfg: RunConfig) -> tuple[list[CheckReport], None]:
    u0 = _initial_field(cfg)
    eps_list = cfg.eps_list if cfg.eps_list is not None else (1e-2, 1e-3, 1e-4)
    report = conservation_sweep(
        u0,
        coeffs=cfg.coeffs,
        eps_list=sorted(eps_list, reverse=True),
        horizon=cfg.t_end if cfg.t_end is not None else 0.1,
        dt=cfg.dt,
        sample_every=cfg.sample_every,
        scheme=cfg.scheme,
    )
    return [report], None


_HANDLERS = {
    "evolve": _run_evolve,
    "identities": _run_identities,
    "commutators": _run_commutators,
    "symbols": _run_symbols,
    "gn": _run_gn,
    "mollifier": _run_mollifier,
    "loss": _run_loss,
    "two-solution": _run_two_solution,
    "bona-smith": _run_bona_smith,
    "conserve": _run_conserve,
}


def run_command(cfg: RunConfig) -> tuple[list[CheckReport], Trajectory | None]:
    """Execute one validated RunConfig; returns its reports and trajectory."""
    return _HANDLERS[cfg.command](cfg)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bo4lab",
        description=(
            "Pseudo-spectral simulator and verification harness for a "
            "fourth-order dispersive equation on the torus."
        ),
        epilog=(
            "Config files are 'key = value' lines with '#' comments; defaults: "
            "n=256, preset=integrable, s=4, s0=3.6, epsilon=1e-3, seed=0."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    descriptions = {
        "evolve": "time-step one initial state and record diagnostics",
        "identities": "exact integration-by-parts identity catalog",
        "commutators": "commutator-remainder constant stability checks",
        "symbols": "discrete symbol-inequality scans",
        "gn": "interpolation-inequality ratio checks",
        "mollifier": "mollifier rate/contraction/smoothing checks",
        "loss": "derivative-loss growth-rate experiment",
        "two-solution": "two-solution energy inequality constant",
        "bona-smith": "vanishing-viscosity convergence orders",
        "conserve": "mass conservation and dissipation sweep",
    }
    for command in COMMANDS:
        p = sub.add_parser(command, help=descriptions[command])
        p.add_argument("--config", required=True, help="path to a key = value config file")
        p.add_argument("--out", default=None, help="output directory (default: config's)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as err:
        print(f"bo4lab: cannot read config {args.config}: {err}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, command=args.command)
        cfg = with_cli_overrides(cfg, out_dir=args.out, seed=args.seed)
        reports, traj = run_command(cfg)
    except (ConfigError, ValueError, TypeError) as err:
        print(f"bo4lab: {err}", file=sys.stderr)
        return 2
    except (SymbolScanError, BlowUpError) as err:
        # a hard inequality violation or runaway run is a failed check, not
        # a usage error
        print(f"bo4lab: {err}", file=sys.stderr)
        return 1
    write_run_outputs(cfg.out_dir, reports, traj, config_text=cfg.text, seed=cfg.seed)
    for r in reports:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict} {r.name}: measured={r.measured:.6g} bound={r.bound:.6g}")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
