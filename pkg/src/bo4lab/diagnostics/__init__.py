"""Numerical verification harness: identities, bounds, scans, experiments."""

from .commutators import (
    COMMUTATOR_KINDS,
    PAIR_KINDS,
    TRIPLE_KINDS,
    check_commutator_stability,
    commutator_bound,
    commutator_residual,
    fit_commutator_constant,
)
from .experiments import (
    bona_smith_convergence,
    centered_diff4,
    conservation_check,
    conservation_sweep,
    derivative_loss_experiment,
    fit_loglog,
    parallel_map,
    two_solution_experiment,
)
from .identities import IDENTITY_IDS, check_identity
from .rates import (
    GN_CONSTANT,
    gn_check,
    lp_norm,
    mollifier_contraction_check,
    mollifier_rate_check,
    mollifier_smoothing_check,
)
from .report import CheckReport
from .symbols import INEQUALITY_IDS, SymbolScanError, SymbolScanSpec, symbol_scan

__all__ = [
    "CheckReport",
    "IDENTITY_IDS",
    "check_identity",
    "COMMUTATOR_KINDS",
    "PAIR_KINDS",
    "TRIPLE_KINDS",
    "commutator_residual",
    "commutator_bound",
    "fit_commutator_constant",
    "check_commutator_stability",
    "INEQUALITY_IDS",
    "SymbolScanError",
    "SymbolScanSpec",
    "symbol_scan",
    "GN_CONSTANT",
    "lp_norm",
    "gn_check",
    "mollifier_rate_check",
    "mollifier_contraction_check",
    "mollifier_smoothing_check",
    "centered_diff4",
    "fit_loglog",
    "parallel_map",
    "derivative_loss_experiment",
    "two_solution_experiment",
    "bona_smith_convergence",
    "conservation_check",
    "conservation_sweep",
]
