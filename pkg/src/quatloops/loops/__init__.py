"""Loop programs and their execution."""

from .engine import (
    RandomDraws,
    StepRecord,
    StepState,
    initial_state,
    j_grid,
    make_draws,
    path_coords,
    run_loop,
    run_step,
    step_matrices,
    sweep,
)
from .program import LOOP_NAMES, LoopProgram, ProgramError, loop_table, parse_program, serialize_program

__all__ = [
    "LOOP_NAMES",
    "LoopProgram",
    "ProgramError",
    "RandomDraws",
    "StepRecord",
    "StepState",
    "initial_state",
    "j_grid",
    "loop_table",
    "make_draws",
    "parse_program",
    "path_coords",
    "run_loop",
    "run_step",
    "serialize_program",
    "step_matrices",
    "sweep",
]
