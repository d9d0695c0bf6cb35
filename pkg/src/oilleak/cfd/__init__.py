"""2D two-phase VOF solver on a staggered grid with pressure projection."""

from .backend import BACKEND, USING_NUMBA, kernels
from .grid import (PRESSURE_OUTLET, SYMMETRY, WALL, BoundarySide,
                   BreachFaces, Grid2D)
from .solver import (CfdRun, ProjectionDiverged, advect_scalar,
                     breach_exit_speed, breach_outflow, face_masks,
                     poisson_coefficients, project, read_snapshot,
                     run_leak_simulation, snapshot_fields, stable_dt, step,
                     write_snapshot)
from .state import (AIR_DENSITY, CfdSetupError, FlowState, FluidProps,
                    PhaseProps, SolverOptions, breach_faces_for_scenario,
                    grid_for_scenario, hydrostatic_pressure,
                    init_from_scenario, make_state)

__all__ = [
    "BACKEND", "USING_NUMBA", "kernels",
    "WALL", "PRESSURE_OUTLET", "SYMMETRY",
    "BoundarySide", "BreachFaces", "Grid2D",
    "CfdRun", "ProjectionDiverged", "advect_scalar", "breach_exit_speed",
    "breach_outflow", "face_masks", "poisson_coefficients", "project",
    "read_snapshot", "run_leak_simulation", "snapshot_fields", "stable_dt",
    "step", "write_snapshot",
    "AIR_DENSITY", "CfdSetupError", "FlowState", "FluidProps", "PhaseProps",
    "SolverOptions", "breach_faces_for_scenario", "grid_for_scenario",
    "hydrostatic_pressure", "init_from_scenario", "make_state",
]
