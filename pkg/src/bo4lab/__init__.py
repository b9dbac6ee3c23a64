"""Pseudo-spectral simulator and verification harness for a fourth-order
dispersive equation of Benjamin-Ono type on the 2-pi-periodic torus.

The equation is

    du/dt = dx K(u) - epsilon dx^4 u,
    K(u)  = H dx^3 u + c1 u dx^2 u + c2 (dx u)^2 + c3 (H dx u)^2
            + c4 H(u H dx^2 u) + c5 H(u^2 dx u) + c6 u H(u dx u)
            + c7 u^2 H dx u - c8 u^4,

with H the Hilbert transform.  The package provides the spectral grid
and operator calculus (`grid`), the split nonlinearity (`equations`),
corrected Sobolev energies with their comparison constants (`energy`),
exponential integrators (`evolve`), and a verification harness for the
identities, commutator bounds, symbol inequalities, embedding rates, and
dynamical experiments that back the energy method (`diagnostics`).
"""

from .energy import (
    EnergyParams,
    Lambdas,
    NumericsError,
    choose_big_constant,
    comparison_mid_hs,
    comparison_mid_l2,
    corrections_hs,
    corrections_l2,
    energy_hs,
    energy_l2,
    i_factor,
    lambdas,
)
from .equations import (
    CoefficientSet,
    NonlinearEvaluator,
    SolverParams,
    nonlinearity_K,
    rhs,
    rhs_spectrum,
    split_F,
)
from .evolve import (
    BlowUpError,
    DiagnosticsSpec,
    StepperConfig,
    Trajectory,
    auto_dt,
    evolve,
    linear_symbol,
    phi1,
    phi2,
    phi3,
    step,
    suggest_dt,
)
from .grid import (
    ConfigError,
    Field,
    GridMismatchError,
    MultiplierSpec,
    NonFiniteError,
    TorusGrid,
    apply_multiplier,
    apply_symbol,
    bessel_weight,
    dealiased_product,
    deriv,
    frac_deriv,
    harmonic,
    hilbert,
    inner,
    integral,
    j_op,
    make_grid,
    mollify,
    norm_hneg1,
    norm_hs,
    norm_l2,
    pow_abs,
    psi_cutoff,
    random_field,
    refine_field,
    rho_cutoff,
    smoothstep,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # grid
    "ConfigError",
    "GridMismatchError",
    "NonFiniteError",
    "TorusGrid",
    "Field",
    "MultiplierSpec",
    "make_grid",
    "harmonic",
    "random_field",
    "smoothstep",
    "psi_cutoff",
    "rho_cutoff",
    "pow_abs",
    "apply_symbol",
    "apply_multiplier",
    "hilbert",
    "deriv",
    "frac_deriv",
    "bessel_weight",
    "j_op",
    "mollify",
    "translate",
    "dealiased_product",
    "integral",
    "inner",
    "norm_l2",
    "norm_hs",
    "norm_hneg1",
    "refine_field",
    # equations
    "CoefficientSet",
    "SolverParams",
    "NonlinearEvaluator",
    "split_F",
    "nonlinearity_K",
    "rhs",
    "rhs_spectrum",
    # energy
    "EnergyParams",
    "Lambdas",
    "NumericsError",
    "lambdas",
    "corrections_hs",
    "corrections_l2",
    "comparison_mid_hs",
    "comparison_mid_l2",
    "energy_hs",
    "energy_l2",
    "choose_big_constant",
    "i_factor",
    # evolve
    "BlowUpError",
    "StepperConfig",
    "DiagnosticsSpec",
    "Trajectory",
    "linear_symbol",
    "phi1",
    "phi2",
    "phi3",
    "auto_dt",
    "suggest_dt",
    "step",
    "evolve",
]
