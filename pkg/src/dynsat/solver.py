"""MaxWalkSat: noise-driven hill climbing over truth assignments.

The search state lives in flat typed arrays (see ``_pykernel``) so that the
compiled kernel can run the flip loop without touching Python objects.
Clause bookkeeping (adding, removing, occurrence lists) stays in Python.
"""
from __future__ import annotations

import time
from array import array
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from . import _pykernel as pyk
from . import kernel
from .kernel import (
    BUDGET_EXHAUSTED,
    C_BAD,
    C_BEST,
    C_BEST_FLIP,
    C_FLIP,
    C_FLIPS,
    C_HARD_N,
    C_SOFT_N,
    C_TRACE_N,
    C_TRY,
    N_CTR,
    NO_TRACE,
    STATUS_NAMES,
    TRACE_FLIPS,
    TRACE_NONE,
    YIELDED,
    Trace,
)
from .model import MAX_TOTAL_WEIGHT, Assignment, Clause, Formula, InputError, Literal
from .rng import noise_threshold, seed_state

Observer = Callable[[int, int, float], None]


@dataclass(frozen=True)
class SolverParams:
    max_flips: int = 100_000
    max_tries: int = 10
    target: int = 0
    noise: float = 0.5
    seed: int = 0
    hard_limit: int | None = None
    restart_each_try: bool = False

    def __post_init__(self):
        if not 0.0 <= self.noise <= 1.0:
            raise InputError(f"noise must lie in [0, 1], got {self.noise}")
        for name in ("max_flips", "max_tries", "target"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise InputError(f"{name} must be a non-negative integer, got {value!r}")
        if self.target > MAX_TOTAL_WEIGHT:
            raise InputError("target out of range")
        if self.hard_limit is not None and self.hard_limit < 1:
            raise InputError("hard_limit must be >= 1")

    def replace(self, **changes) -> "SolverParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SolveReport:
    final_assignment: Assignment
    final_cost: int
    best_cost: int
    best_assignment: Assignment
    flips_performed: int
    tries_performed: int
    elapsed: float
    terminated_by: str
    best_flip: int = 0


def _lit_code(lit: Literal) -> int:
    return lit.variable * 2 + lit.negated


class SolverState:
    """Assignment, unsatisfied-clause partition and running cost for one formula.

    Not thread-safe; confine each state to one thread at a time.
    """

    def __init__(self, f: Formula, params: SolverParams, assignment: Assignment | None = None):
        self.params = params
        self.hard_limit = params.hard_limit if params.hard_limit is not None else f.hard_limit
        self.rng = seed_state(params.seed)
        self.num_vars = 0
        self.values = array("B", [0])
        self.best_values = array("B", [0])
        self.lit_start = array("i")
        self.lit_len = array("i")
        self.lits = array("i")
        self.weight = array("q")
        self.num_true = array("i")
        self.where = array("i")
        self.hard_list = array("i")
        self.soft_list = array("i")
        self.occ_start = array("i", [0, 0])
        self.occ = array("i")
        self.scratch = array("q", [0])
        self.ctr = array("q", [0] * N_CTR)
        self.fctr = array("d", [0.0])
        self._clauses: list[Clause | None] = []
        self._slot: dict[int, int] = {}
        self._free: list[int] = []
        self._dirty = True
        self._formula: Formula | None = None
        self._garbage = 0
        self.next_clause_id = max((c.id for c in f.clauses), default=0) + 1

        self._grow_vars(f.num_vars, assignment)
        for c in f.clauses:
            self._insert(c)
        self._sync()
        kernel.active.rebuild(self)
        self.reset_search()

    # -- variables and clauses -------------------------------------------

    def _grow_vars(self, n: int, assignment: Assignment | None = None):
        if n <= self.num_vars:
            return
        first = self.num_vars + 1
        self.values.extend(bytes(n - self.num_vars))
        self.best_values.extend(bytes(n - self.num_vars))
        self.num_vars = n
        if assignment is not None:
            if assignment.num_vars < n:
                raise InputError(f"assignment covers {assignment.num_vars} of {n} variables")
            for v in range(first, n + 1):
                self.values[v] = assignment[v]
        else:
            pyk.randomize(self, first)
        self._dirty = True

    def _insert(self, c: Clause) -> int:
        if self._free:
            slot = self._free.pop()
        else:
            slot = len(self._clauses)
            self._clauses.append(None)
            for arr in (self.lit_start, self.lit_len, self.num_true, self.where,
                        self.hard_list, self.soft_list):
                arr.append(0)
            self.weight.append(0)
        self._clauses[slot] = c
        self._slot[c.id] = slot
        self.lit_start[slot] = len(self.lits)
        self.lit_len[slot] = len(c.literals)
        self.lits.extend(_lit_code(lit) for lit in c.literals)
        self.weight[slot] = c.weight
        t = sum(1 for lit in c.literals if self.values[lit.variable] != lit.negated)
        self.num_true[slot] = t
        self.where[slot] = -1
        if t == 0:
            pyk.unsat_add(self, slot)
            self.ctr[C_BAD] += c.weight
        self._dirty = True
        self._formula = None
        return slot

    def add_clause(self, weight: int, literals: Iterable, clause_id: int | None = None) -> int:
        """Insert a clause; unseen variables get random values. Returns its id."""
        cid = self.next_clause_id if clause_id is None else clause_id
        if cid in self._slot:
            raise InputError(f"clause id {cid} already present")
        c = Clause(cid, weight, tuple(literals))
        if self.total_weight() + c.weight > MAX_TOTAL_WEIGHT:
            raise InputError("total weight out of range")
        self._grow_vars(max(c.variables))
        self._insert(c)
        self.next_clause_id = max(self.next_clause_id, cid + 1)
        return cid

    def remove_clause(self, clause_id: int) -> int:
        """Delete a clause by id; variables stay. Returns the removed weight."""
        try:
            slot = self._slot.pop(clause_id)
        except KeyError:
            raise KeyError(f"no clause with id {clause_id}") from None
        c = self._clauses[slot]
        if self.where[slot] >= 0:
            pyk.unsat_remove(self, slot)
            self.ctr[C_BAD] -= c.weight
        self._clauses[slot] = None
        self._free.append(slot)
        self._garbage += self.lit_len[slot]
        self.lit_len[slot] = 0
        self.weight[slot] = 0
        self.num_true[slot] = 0
        self._dirty = True
        self._formula = None
        return c.weight

    def _sync(self):
        """Rebuild occurrence lists (and compact literal storage) after edits."""
        if not self._dirty:
            return
        if self._garbage > len(self.lits) // 2:
            lits = array("i")
            for slot, c in enumerate(self._clauses):
                if c is not None:
                    self.lit_start[slot] = len(lits)
                    lits.extend(_lit_code(lit) for lit in c.literals)
            self.lits = lits
            self._garbage = 0
        n = self.num_vars
        counts = [0] * (n + 2)
        maxlen = 1
        for c in self._clauses:
            if c is not None:
                maxlen = max(maxlen, len(c.literals))
                for lit in c.literals:
                    counts[lit.variable + 1] += 1
        for v in range(1, n + 2):
            counts[v] += counts[v - 1]
        occ_start = array("i", counts)
        fill = counts[:]
        occ = array("i", bytes(4 * counts[n + 1]))
        for slot, c in enumerate(self._clauses):
            if c is not None:
                for lit in c.literals:
                    occ[fill[lit.variable]] = slot * 2 + lit.negated
                    fill[lit.variable] += 1
        self.occ_start = occ_start
        self.occ = occ
        if len(self.scratch) < maxlen:
            self.scratch = array("q", bytes(8 * maxlen))
        self._dirty = False

    # -- views -------------------------------------------------------------

    @property
    def formula(self) -> Formula:
        if self._formula is None:
            clauses = sorted((c for c in self._clauses if c is not None), key=lambda c: c.id)
            self._formula = Formula(self.num_vars, tuple(clauses), self.hard_limit)
        return self._formula

    @property
    def assignment(self) -> Assignment:
        return Assignment(tuple(self.values[1:]))

    @property
    def best_assignment(self) -> Assignment:
        return Assignment(tuple(self.best_values[1:]))

    @property
    def bad(self) -> int:
        return self.ctr[C_BAD]

    @property
    def best_cost(self) -> int:
        return self.ctr[C_BEST]

    @property
    def i(self) -> int:
        return self.ctr[C_TRY]

    @property
    def j(self) -> int:
        return self.ctr[C_FLIP]

    @property
    def flips(self) -> int:
        return self.ctr[C_FLIPS]

    @property
    def hard_unsat(self) -> frozenset[int]:
        return frozenset(self._clauses[self.hard_list[k]].id for k in range(self.ctr[C_HARD_N]))

    @property
    def soft_unsat(self) -> frozenset[int]:
        return frozenset(self._clauses[self.soft_list[k]].id for k in range(self.ctr[C_SOFT_N]))

    @property
    def occurrence_index(self) -> dict[int, list[int]]:
        self._sync()
        return {
            v: [self._clauses[self.occ[k] >> 1].id
                for k in range(self.occ_start[v], self.occ_start[v + 1])]
            for v in range(1, self.num_vars + 1)
        }

    def clause_ids(self) -> list[int]:
        return sorted(self._slot)

    def total_weight(self) -> int:
        return sum(self.weight)

    def slot_of(self, clause_id: int) -> int:
        return self._slot[clause_id]

    def clause_at(self, slot: int) -> Clause:
        return self._clauses[slot]

    # -- counters ----------------------------------------------------------

    def reset_search(self):
        """Zero the try/flip counters and restart best tracking from ``m``."""
        ctr = self.ctr
        ctr[C_TRY] = ctr[C_FLIP] = ctr[C_FLIPS] = ctr[C_TRACE_N] = 0
        ctr[C_BEST] = ctr[C_BAD]
        ctr[C_BEST_FLIP] = 0
        self.best_values[:] = self.values
        self.fctr[0] = 0.0


def init_state(f: Formula, p: SolverParams, assignment: Assignment | None = None) -> SolverState:
    """Random (or given) initial assignment with the unsat partition computed from scratch."""
    return SolverState(f, p, assignment)


def _check_var(s: SolverState, q: int):
    if not 1 <= q <= s.num_vars:
        raise InputError(f"variable {q} outside 1..{s.num_vars}")


def breakcount(s: SolverState, q: int) -> int:
    _check_var(s, q)
    s._sync()
    return pyk.breakcount(s, q)


def select_clause(s: SolverState) -> int:
    """Random unsatisfied clause id, hard clauses first."""
    if s.ctr[C_HARD_N] + s.ctr[C_SOFT_N] == 0:
        raise ValueError("no unsatisfied clause to select")
    return s.clause_at(pyk.pick_clause(s)).id


def select_variable(s: SolverState, clause_id: int, noise: float | None = None) -> int:
    slot = s.slot_of(clause_id)
    if s.where[slot] < 0:
        raise ValueError(f"clause {clause_id} is satisfied")
    s._sync()
    noise = s.params.noise if noise is None else noise
    return pyk.pick_var(s, slot, noise_threshold(noise))


def flip(s: SolverState, p: int) -> SolverState:
    _check_var(s, p)
    s._sync()
    pyk.flip(s, p)
    return s


def step(s: SolverState) -> int:
    """One iteration of the inner loop body: select, flip, count. Returns the flipped variable."""
    v = select_variable(s, select_clause(s))
    flip(s, v)
    s.ctr[C_FLIP] += 1
    s.ctr[C_FLIPS] += 1
    if s.ctr[C_BAD] < s.ctr[C_BEST]:
        s.ctr[C_BEST] = s.ctr[C_BAD]
        s.ctr[C_BEST_FLIP] = s.ctr[C_FLIPS]
        s.best_values[:] = s.values
    return v


def _tries_performed(status: int, s: SolverState, p: SolverParams) -> int:
    if status == BUDGET_EXHAUSTED:
        return p.max_tries
    return min(s.ctr[C_TRY] + 1, p.max_tries)


def make_report(s: SolverState, p: SolverParams, status: int, elapsed: float) -> SolveReport:
    return SolveReport(
        final_assignment=s.assignment,
        final_cost=s.bad,
        best_cost=s.best_cost,
        best_assignment=s.best_assignment,
        flips_performed=s.flips,
        tries_performed=_tries_performed(status, s, p),
        elapsed=elapsed,
        terminated_by=STATUS_NAMES[status],
        best_flip=s.ctr[C_BEST_FLIP],
    )


def run(
    s: SolverState,
    p: SolverParams | None = None,
    observer: Observer | None = None,
    backend=None,
) -> SolveReport:
    """Run up to ``max_tries * max_flips`` flips from the current assignment.

    Stops early the first time ``bad < target`` at the top of the inner loop,
    or when no clause is unsatisfied. ``observer(flip, bad, elapsed)`` is
    called once for the starting state (flip 0) and then after every flip.
    """
    p = s.params if p is None else p
    k = kernel.active if backend is None else backend
    s._sync()
    s.reset_search()
    flags = bytearray(2)
    thr = noise_threshold(p.noise)
    t0 = time.monotonic()
    if observer is None:
        status = k.run(s, p.max_tries, p.max_flips, p.target, thr, p.restart_each_try,
                       -1, TRACE_NONE, NO_TRACE, t0, flags)
    else:
        observer(0, s.bad, 0.0)
        trace = Trace(4096)
        while True:
            status = k.run(s, p.max_tries, p.max_flips, p.target, thr, p.restart_each_try,
                           -1, TRACE_FLIPS, trace, t0, flags)
            for n in range(s.ctr[C_TRACE_N]):
                observer(trace.flip[n], trace.cost[n], trace.time[n])
            s.ctr[C_TRACE_N] = 0
            if status != YIELDED:
                break
    return make_report(s, p, status, time.monotonic() - t0)


def solve(f: Formula, p: SolverParams | None = None, observer: Observer | None = None) -> SolveReport:
    """Convenience wrapper: fresh state, then :func:`run`."""
    p = SolverParams() if p is None else p
    return run(init_state(f, p), p, observer)


def check_state(s: SolverState) -> None:
    """Raise AssertionError unless the incremental bookkeeping matches a full recount."""
    from .model import evaluate_clause

    f = s.formula
    m = s.assignment
    unsat = [c for c in f.clauses if not evaluate_clause(c, m)]
    hard = {c.id for c in unsat if c.weight >= s.hard_limit}
    soft = {c.id for c in unsat if c.weight < s.hard_limit}
    assert s.bad == sum(c.weight for c in unsat), (s.bad, sum(c.weight for c in unsat))
    assert s.hard_unsat == hard, (s.hard_unsat, hard)
    assert s.soft_unsat == soft, (s.soft_unsat, soft)
    occ = s.occurrence_index
    for v in range(1, s.num_vars + 1):
        expected = sorted(c.id for c in f.clauses if v in c.variables)
        assert sorted(occ[v]) == expected, (v, occ[v], expected)
