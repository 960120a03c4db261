"""Dynamic WCSP sequences derived from a static formula, and their replay.

A sequence starts from the first half of the clauses (rounded up), adds the
second half in batches, then removes those batches again in reverse order so
that every formula in the removal phase was already seen during additions.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .dynamic import AddEvent, DynamicSolver, RemoveEvent, SolveEvent, format_script
from .model import Assignment, Clause, Formula, InputError, score
from .rng import derive_seed
from .solver import SolveReport, SolverParams, init_state, run

WARM = "warm_incremental"
COLD = "cold_restart"
STRATEGIES = (WARM, COLD)


@dataclass(frozen=True)
class AddBatch:
    clauses: tuple[Clause, ...]

    kind = "add"


@dataclass(frozen=True)
class RemoveBatch:
    clause_ids: tuple[int, ...]

    kind = "remove"


Batch = AddBatch | RemoveBatch


@dataclass(frozen=True)
class DwcspSequence:
    initial: Formula
    events: tuple[Batch, ...]
    batch_size: int

    def formulas(self) -> list[Formula]:
        """The formula in force after the initial solve and after each event."""
        current = {c.id: c for c in self.initial.clauses}
        out = [self.initial]
        nv, top = self.initial.num_vars, self.initial.hard_limit
        for e in self.events:
            if isinstance(e, AddBatch):
                for c in e.clauses:
                    current[c.id] = c
            else:
                for cid in e.clause_ids:
                    del current[cid]
            out.append(Formula(nv, tuple(current[k] for k in sorted(current)), top))
        return out

    def to_script(self) -> str:
        """Event script for ``DynamicSolver`` started on ``initial``.

        Solver ids are assigned sequentially from ``max(initial ids) + 1``; the
        removal lines refer to those ids.
        """
        next_id = max((c.id for c in self.initial.clauses), default=0) + 1
        solver_id: dict[int, int] = {}
        lines: list = [SolveEvent()]
        for e in self.events:
            if isinstance(e, AddBatch):
                for c in e.clauses:
                    solver_id[c.id] = next_id
                    next_id += 1
                    lines.append(AddEvent(c.weight, c.dimacs()))
            else:
                lines.extend(RemoveEvent(solver_id[cid]) for cid in e.clause_ids)
            lines.append(SolveEvent())
        adds = sum(isinstance(e, AddBatch) for e in self.events)
        comments = [f"dwcsp batch_size={self.batch_size} add_batches={adds} "
                    f"remove_batches={len(self.events) - adds}"]
        return format_script(lines, comments)


def generate_sequence(f: Formula, batch_size: int) -> DwcspSequence:
    if batch_size < 1:
        raise InputError("batch_size must be >= 1")
    if not f.clauses:
        raise InputError("cannot build a sequence from a formula without clauses")
    half = (len(f.clauses) + 1) // 2
    initial = Formula(f.num_vars, f.clauses[:half], f.hard_limit)
    rest = f.clauses[half:]
    adds = [AddBatch(tuple(rest[k:k + batch_size])) for k in range(0, len(rest), batch_size)]
    removes = [RemoveBatch(tuple(c.id for c in b.clauses)) for b in reversed(adds)]
    return DwcspSequence(initial, tuple(adds + removes), batch_size)


@dataclass(frozen=True)
class EventReport:
    """One solve within a replay.

    ``score_before`` is the strategy's solution from the previous event scored
    under this event's formula; ``score_after`` is the score of the solution it
    holds after solving. ``start_score`` is the score of the assignment the
    search actually started from (a fresh random one for cold restarts).
    """

    ordinal: int
    kind: str
    strategy: str
    elapsed: float
    score_before: int
    score_after: int
    start_score: int
    best_score: int
    flips: int
    terminated_by: str

    @property
    def velocity(self) -> float | None:
        if self.elapsed <= 0:
            return None
        return (self.score_after - self.score_before) / self.elapsed


def _params_for(p: SolverParams, targets, k: int) -> SolverParams:
    return p if targets is None else p.replace(target=targets[k])


def replay(
    seq: DwcspSequence,
    strategy: str,
    p: SolverParams,
    targets: Sequence[int] | None = None,
    initial_assignment: Assignment | None = None,
) -> list[EventReport]:
    """Solve the initial formula, then every event, with one of the two strategies.

    Both strategies start the initial solve from the same assignment (drawn
    from ``p.seed`` unless given). ``targets`` optionally overrides
    ``p.target`` per solve (index 0 is the initial solve).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if targets is not None and len(targets) != len(seq.events) + 1:
        raise ValueError("need one target per solve")
    if initial_assignment is None:
        initial_assignment = init_state(seq.initial, p).assignment
    if strategy == WARM:
        return _replay_warm(seq, p, targets, initial_assignment)
    return _replay_cold(seq, p, targets, initial_assignment)


def _report(k, kind, strategy, elapsed, before, total, start_bad, rep: SolveReport):
    return EventReport(k, kind, strategy, elapsed, before, total - rep.final_cost,
                       total - start_bad, total - rep.best_cost, rep.flips_performed,
                       rep.terminated_by)


def _replay_warm(seq, p, targets, m0):
    solver = DynamicSolver(seq.initial, _params_for(p, targets, 0), m0)
    total = seq.initial.total_weight
    start_bad = solver.bad
    t0 = time.monotonic()
    rep = solver.resolve()
    reports = [_report(0, "initial", WARM, time.monotonic() - t0, total - start_bad,
                       total, start_bad, rep)]
    solver_id: dict[int, int] = {}
    for k, e in enumerate(seq.events, start=1):
        solver.params = _params_for(p, targets, k)
        t0 = time.monotonic()
        if isinstance(e, AddBatch):
            for c in e.clauses:
                solver_id[c.id] = solver.add_constraint(c.weight, c.literals)
                total += c.weight
        else:
            for cid in e.clause_ids:
                total -= solver.remove_constraint(solver_id.pop(cid))
        start_bad = solver.bad
        rep = solver.resolve()
        elapsed = time.monotonic() - t0
        reports.append(_report(k, e.kind, WARM, elapsed, total - start_bad, total,
                               start_bad, rep))
    return reports


def _replay_cold(seq, p, targets, m0):
    formulas = seq.formulas()
    reports = []
    held = m0
    for k, f in enumerate(formulas):
        pk = _params_for(p, targets, k)
        before = score(f, held)
        t0 = time.monotonic()
        if k == 0:
            st = init_state(f, pk, m0)
        else:
            st = init_state(f, pk.replace(seed=derive_seed(p.seed, k)))
        start_bad = st.bad
        rep = run(st, pk)
        elapsed = time.monotonic() - t0
        kind = "initial" if k == 0 else seq.events[k - 1].kind
        reports.append(_report(k, kind, COLD, elapsed, before, f.total_weight, start_bad, rep))
        held = rep.final_assignment
    return reports
