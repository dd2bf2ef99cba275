"""Axisymmetric neo-Hookean energy minimization and diagnostics on meridian grids."""

from .energy import EnergyBreakdown, energy, energy_and_gradient, energy_gradient
from .errors import ConfigError, ConstraintError, ContractError, InfeasibleDeterminantError
from .grid import ANNULUS, AXIS, DomainSpec, MeridianGrid, build_grid, tube_region
from .kinematics import (DeformationField, Feasibility, KinematicsSample, check_feasibility,
                         evaluate_field, sample_kinematics)
from .material import MaterialLaw, eval_H, eval_H_prime, eval_H_second, growth_constants, stationary_point
from .solve import BoundaryData, SolveHistory, SolveOptions, apply_boundary, check_history, minimize

__all__ = [
    "ANNULUS", "AXIS", "BoundaryData", "ConfigError", "ConstraintError", "ContractError", "DeformationField",
    "DomainSpec", "EnergyBreakdown", "Feasibility", "InfeasibleDeterminantError", "KinematicsSample",
    "MaterialLaw", "MeridianGrid", "SolveHistory", "SolveOptions", "apply_boundary", "build_grid",
    "check_feasibility", "check_history", "energy", "energy_and_gradient", "energy_gradient", "eval_H",
    "eval_H_prime", "eval_H_second", "evaluate_field", "growth_constants", "minimize", "sample_kinematics",
    "stationary_point", "tube_region",
]
