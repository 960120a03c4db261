"""Exhaustive reference answers for small formulas.

These share no code with ``solver`` or ``model.cost``: clauses are compiled
to positive/negative bit masks and every assignment is enumerated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Assignment, Formula

MAX_ORACLE_VARS = 24
_BLOCK = 1 << 16


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimal_cost: int
    assignment: Assignment
    evaluated_count: int


def _masks(f: Formula):
    pos = np.zeros(len(f.clauses), dtype=np.int64)
    neg = np.zeros(len(f.clauses), dtype=np.int64)
    w = np.zeros(len(f.clauses), dtype=np.int64)
    for k, c in enumerate(f.clauses):
        for lit in c.literals:
            bit = 1 << (lit.variable - 1)
            if lit.negated:
                neg[k] |= bit
            else:
                pos[k] |= bit
        w[k] = c.weight
    return pos, neg, w


def brute_force_optimum(f: Formula) -> OracleResult:
    """Minimum cost over all ``2**num_vars`` assignments (bit k of the index = variable k+1)."""
    n = f.num_vars
    if n > MAX_ORACLE_VARS:
        raise OracleRefused(f"{n} variables exceeds the oracle limit of {MAX_ORACLE_VARS}")
    total = 1 << n
    pos, neg, w = _masks(f)
    best_cost = None
    best_index = 0
    full = (1 << n) - 1
    for lo in range(0, total, _BLOCK):
        a = np.arange(lo, min(lo + _BLOCK, total), dtype=np.int64)
        costs = np.zeros(a.shape, dtype=np.int64)
        na = ~a & full
        for k in range(len(w)):
            unsat = ((a & pos[k]) == 0) & ((na & neg[k]) == 0)
            costs += unsat * w[k]
        idx = int(np.argmin(costs))
        if best_cost is None or costs[idx] < best_cost:
            best_cost = int(costs[idx])
            best_index = int(a[idx])
    if best_cost is None:
        best_cost = 0
    m = Assignment(tuple(bool(best_index >> v & 1) for v in range(n)))
    return OracleResult(best_cost, m, total)


def _satisfied(lits, values) -> bool:
    return any(values[v - 1] != neg for v, neg in lits)


def brute_force_breakcount(f: Formula, m: Assignment, q: int) -> int:
    """Weight of clauses satisfied by ``m`` but not by ``m`` with ``q`` flipped."""
    before = list(m.values)
    after = list(before)
    after[q - 1] = not after[q - 1]
    total = 0
    for c in f.clauses:
        lits = [(lit.variable, lit.negated) for lit in c.literals]
        if _satisfied(lits, before) and not _satisfied(lits, after):
            total += c.weight
    return total


def brute_force_costs(f: Formula) -> np.ndarray:
    """Cost of every assignment, indexed as in :func:`brute_force_optimum`."""
    n = f.num_vars
    if n > MAX_ORACLE_VARS:
        raise OracleRefused(f"{n} variables exceeds the oracle limit of {MAX_ORACLE_VARS}")
    pos, neg, w = _masks(f)
    a = np.arange(1 << n, dtype=np.int64)
    na = ~a & ((1 << n) - 1)
    costs = np.zeros(a.shape, dtype=np.int64)
    for k in range(len(w)):
        costs += (((a & pos[k]) == 0) & ((na & neg[k]) == 0)) * w[k]
    return costs
