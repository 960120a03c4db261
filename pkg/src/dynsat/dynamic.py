"""DMaxWalkSat: add and remove clauses in place, then resume the search.

Edits keep the current assignment. Resolving resets the try/flip counters,
so each resolve gets the full flip budget again.

Event scripts are line based::

    c comment
    add <W> <l1> ... <lk> 0
    remove <ID>
    solve
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Assignment, Formula, Literal
from .solver import Observer, SolveReport, SolverParams, init_state, run


class ScriptError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DynamicSolver:
    def __init__(self, f: Formula, params: SolverParams, assignment: Assignment | None = None):
        self.params = params
        self.state = init_state(f, params, assignment)

    @property
    def next_clause_id(self) -> int:
        return self.state.next_clause_id

    @property
    def formula(self) -> Formula:
        return self.state.formula

    @property
    def assignment(self) -> Assignment:
        return self.state.assignment

    @property
    def bad(self) -> int:
        return self.state.bad

    def add_constraint(self, weight: int, literals: Sequence[Literal | int]) -> int:
        return self.state.add_clause(weight, literals)

    def remove_constraint(self, clause_id: int) -> int:
        return self.state.remove_clause(clause_id)

    def resolve(self, observer: Observer | None = None) -> SolveReport:
        return run(self.state, self.params, observer)


@dataclass(frozen=True)
class AddEvent:
    weight: int
    literals: tuple[int, ...]

    def line(self) -> str:
        return " ".join(map(str, ("add", self.weight, *self.literals, 0)))


@dataclass(frozen=True)
class RemoveEvent:
    clause_id: int

    def line(self) -> str:
        return f"remove {self.clause_id}"


@dataclass(frozen=True)
class SolveEvent:
    def line(self) -> str:
        return "solve"


ScriptEvent = AddEvent | RemoveEvent | SolveEvent


def parse_script(text: str | Iterable[str]) -> list[ScriptEvent]:
    lines = text.splitlines() if isinstance(text, str) else text
    events: list[ScriptEvent] = []
    for lineno, raw in enumerate(lines, start=1):
        toks = raw.split()
        if not toks or toks[0].startswith("c"):
            continue
        try:
            nums = [int(t) for t in toks[1:]]
        except ValueError:
            raise ScriptError(f"non-integer field in {raw.strip()!r}", lineno) from None
        op = toks[0]
        if op == "add":
            if len(nums) < 3 or nums[-1] != 0 or 0 in nums[1:-1]:
                raise ScriptError("expected 'add W l1 ... lk 0'", lineno)
            if nums[0] < 1:
                raise ScriptError("weight must be >= 1", lineno)
            events.append(AddEvent(nums[0], tuple(nums[1:-1])))
        elif op == "remove":
            if len(nums) != 1:
                raise ScriptError("expected 'remove ID'", lineno)
            events.append(RemoveEvent(nums[0]))
        elif op == "solve":
            if nums:
                raise ScriptError("'solve' takes no arguments", lineno)
            events.append(SolveEvent())
        else:
            raise ScriptError(f"unknown command {op!r}", lineno)
    return events


def format_script(events: Iterable[ScriptEvent], comments: Iterable[str] = ()) -> str:
    out = [f"c {c}\n" for c in comments]
    out.extend(e.line() + "\n" for e in events)
    return "".join(out)


def run_script(
    solver: DynamicSolver,
    events: Iterable[ScriptEvent],
    observer: Observer | None = None,
) -> list[SolveReport]:
    """Apply events in order; returns one report per ``solve``."""
    reports = []
    for e in events:
        if isinstance(e, AddEvent):
            solver.add_constraint(e.weight, e.literals)
        elif isinstance(e, RemoveEvent):
            solver.remove_constraint(e.clause_id)
        else:
            reports.append(solver.resolve(observer))
    return reports
