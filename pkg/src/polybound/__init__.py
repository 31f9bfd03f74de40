"""Polybound package initialization."""

from __future__ import annotations

from .models import StateIndex, PotentialTerm, PotentialSpec, SolverConfig, make_state
from .results import (
    SolveResult,
    PNumberRecord,
    EnvelopeTerm,
    BoundReport,
    TableCell,
    TableRow,
    ReproduceResult,
    SweepRow,
)
from .radial_solver import (
    eigenvalue,
    aeigenvalue,
    solve,
    count_nodes,
    pure_power_eigenvalue,
)
from .pnumbers import (
    PCache,
    p_from_energy,
    epsilon_from_p,
    p_harmonic,
    p_coulomb,
    p_gamma_lower,
    p_gamma_upper,
    p_lookup,
    p_table,
)
from .envelope import (
    objective,
    kinetic_objective,
    minimize,
    envelope_terms,
    bounds_report,
    abounds_report,
    fractional_bounds,
    even_polynomial,
)
from .anharmonic import (
    AnharmonicModel,
    FullParameterSet,
    lambda_of_energy,
    energy_of_lambda,
    single_constant_lambda,
    critical_radius_squared,
    printed_ground_relation,
    reduce_parameters,
    bhattacharya_energy,
    dasgupta_energy,
    sweep,
)
from .reproduce import Reproducer
from .specfile import load_spec, parse_spec
from .logger import WorkbenchLogger
from .errors import (
    ErrorCode,
    PolyboundError,
    InputValidationError,
    DomainError,
    UnsupportedStateError,
    SpecParseError,
    NonConfiningPotentialError,
    ExponentTooLargeError,
    SolverConvergenceError,
    GammaOverflowError,
    RootBracketError,
    CacheError,
    TableMismatchError,
)


__all__ = [
    "StateIndex",
    "PotentialTerm",
    "PotentialSpec",
    "SolverConfig",
    "make_state",
    "SolveResult",
    "PNumberRecord",
    "EnvelopeTerm",
    "BoundReport",
    "TableCell",
    "TableRow",
    "ReproduceResult",
    "SweepRow",
    "eigenvalue",
    "aeigenvalue",
    "solve",
    "count_nodes",
    "pure_power_eigenvalue",
    "PCache",
    "p_from_energy",
    "epsilon_from_p",
    "p_harmonic",
    "p_coulomb",
    "p_gamma_lower",
    "p_gamma_upper",
    "p_lookup",
    "p_table",
    "objective",
    "kinetic_objective",
    "minimize",
    "envelope_terms",
    "bounds_report",
    "abounds_report",
    "fractional_bounds",
    "even_polynomial",
    "AnharmonicModel",
    "FullParameterSet",
    "lambda_of_energy",
    "energy_of_lambda",
    "single_constant_lambda",
    "critical_radius_squared",
    "printed_ground_relation",
    "reduce_parameters",
    "bhattacharya_energy",
    "dasgupta_energy",
    "sweep",
    "Reproducer",
    "load_spec",
    "parse_spec",
    "WorkbenchLogger",
    "ErrorCode",
    "PolyboundError",
    "InputValidationError",
    "DomainError",
    "UnsupportedStateError",
    "SpecParseError",
    "NonConfiningPotentialError",
    "ExponentTooLargeError",
    "SolverConvergenceError",
    "GammaOverflowError",
    "RootBracketError",
    "CacheError",
    "TableMismatchError",
]

__version__ = "0.1.0"
