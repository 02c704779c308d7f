"""Generalized Spider Solitaire: rules engine, solvers, and a 3-SAT reduction."""

from .cnf import CnfFormula, Literal, brute_force_sat, parse_dimacs
from .engine import Card, Deal, State, Suit, Task, Transfer, apply, initial_state, is_won, legal_moves, replay
from .formats import format_plan, format_task, parse_plan, parse_task
from .generate import random_task
from .reduction import build_task, validate_layout, value_schedule
from .solver import SearchConfig, move_bound, solve, solve_exhaustive, verify_plan
from .strategy import cascade_sweep, extract_plan, reduce_and_certify

__all__ = [
    "Card", "CnfFormula", "Deal", "Literal", "SearchConfig", "State", "Suit", "Task", "Transfer",
    "apply", "brute_force_sat", "build_task", "cascade_sweep", "extract_plan", "format_plan",
    "format_task", "initial_state", "is_won", "legal_moves", "move_bound", "parse_dimacs",
    "parse_plan", "parse_task", "random_task", "reduce_and_certify", "replay", "solve",
    "solve_exhaustive", "validate_layout", "value_schedule", "verify_plan",
]
