"""Stochastic local search for static and dynamic weighted MAX-SAT."""
from .kernel import BACKEND
from .model import Assignment, Clause, Formula, InputError, Literal, cost, evaluate_clause, score
from .solver import SolveReport, SolverParams, SolverState, init_state, run, solve

__all__ = [
    "BACKEND",
    "Assignment",
    "Clause",
    "Formula",
    "InputError",
    "Literal",
    "SolveReport",
    "SolverParams",
    "SolverState",
    "cost",
    "evaluate_clause",
    "init_state",
    "run",
    "score",
    "solve",
]

__version__ = "0.1.0"
