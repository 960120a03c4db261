"""Weighted CNF formulas, assignments and ground-truth cost evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

# Running costs are kept in signed 64-bit slots by the compiled kernel.
MAX_TOTAL_WEIGHT = 2**63 - 1


class InputError(ValueError):
    """Raised for malformed literals, clauses, formulas or assignments."""


@dataclass(frozen=True, slots=True)
class Literal:
    variable: int
    negated: bool = False

    def __post_init__(self):
        if not isinstance(self.variable, int) or self.variable < 1:
            raise InputError(f"literal variable must be a positive integer, got {self.variable!r}")

    @classmethod
    def from_dimacs(cls, code: int) -> "Literal":
        if code == 0:
            raise InputError("0 is not a literal")
        return cls(abs(code), code < 0)

    def to_dimacs(self) -> int:
        return -self.variable if self.negated else self.variable

    def __str__(self):
        return str(self.to_dimacs())


def _as_literal(lit) -> Literal:
    if isinstance(lit, Literal):
        return lit
    if isinstance(lit, int) and not isinstance(lit, bool):
        return Literal.from_dimacs(lit)
    raise InputError(f"cannot interpret {lit!r} as a literal")


@dataclass(frozen=True, slots=True)
class Clause:
    """A weighted disjunction of literals over distinct variables.

    ``literals`` accepts :class:`Literal` objects or signed DIMACS integers.
    """

    id: int
    weight: int
    literals: tuple[Literal, ...]

    def __post_init__(self):
        lits = tuple(_as_literal(lit) for lit in self.literals)
        object.__setattr__(self, "literals", lits)
        if not isinstance(self.weight, int) or self.weight < 1:
            raise InputError(f"clause weight must be an integer >= 1, got {self.weight!r}")
        if self.weight > MAX_TOTAL_WEIGHT:
            raise InputError(f"clause weight {self.weight} exceeds {MAX_TOTAL_WEIGHT}")
        if not lits:
            raise InputError("clause must contain at least one literal")
        seen = set()
        for lit in lits:
            if lit.variable in seen:
                raise InputError(f"variable {lit.variable} occurs twice in clause {self.id}")
            seen.add(lit.variable)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(lit.variable for lit in self.literals)

    def dimacs(self) -> tuple[int, ...]:
        return tuple(lit.to_dimacs() for lit in self.literals)


@dataclass(frozen=True, slots=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...]
    hard_limit: int
    total_weight: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        clauses = tuple(self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 0:
            raise InputError("num_vars must be >= 0")
        if self.hard_limit < 1:
            raise InputError("hard_limit must be >= 1")
        ids = set()
        total = 0
        for c in clauses:
            if c.id in ids:
                raise InputError(f"duplicate clause id {c.id}")
            ids.add(c.id)
            for lit in c.literals:
                if lit.variable > self.num_vars:
                    raise InputError(
                        f"clause {c.id} uses variable {lit.variable} > num_vars={self.num_vars}"
                    )
            total += c.weight
        if total > MAX_TOTAL_WEIGHT:
            raise InputError(f"total weight {total} exceeds {MAX_TOTAL_WEIGHT}")
        object.__setattr__(self, "total_weight", total)

    @classmethod
    def build(
        cls,
        clauses: Iterable[tuple[int, Sequence]],
        hard_limit: int | None = None,
        num_vars: int | None = None,
    ) -> "Formula":
        """Build from ``(weight, literals)`` pairs, numbering clauses from 1.

        ``hard_limit`` defaults to one more than the total weight (all soft);
        ``num_vars`` defaults to the largest variable mentioned.
        """
        built = [Clause(i, w, tuple(lits)) for i, (w, lits) in enumerate(clauses, start=1)]
        if num_vars is None:
            num_vars = max((v for c in built for v in c.variables), default=0)
        if hard_limit is None:
            hard_limit = sum(c.weight for c in built) + 1
        return cls(num_vars, tuple(built), hard_limit)

    def is_hard(self, clause: Clause) -> bool:
        return clause.weight >= self.hard_limit

    def clause(self, clause_id: int) -> Clause:
        for c in self.clauses:
            if c.id == clause_id:
                return c
        raise KeyError(clause_id)

    def __len__(self):
        return len(self.clauses)


@dataclass(frozen=True, slots=True)
class Assignment:
    """Total truth assignment; ``values[k]`` is the value of variable ``k + 1``."""

    values: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    @classmethod
    def from_mapping(cls, m: Mapping[int, bool], num_vars: int | None = None) -> "Assignment":
        n = max(m, default=0) if num_vars is None else num_vars
        missing = [v for v in range(1, n + 1) if v not in m]
        if missing:
            raise InputError(f"assignment missing variables {missing[:5]}")
        return cls(tuple(m[v] for v in range(1, n + 1)))

    @classmethod
    def from_bits(cls, bits: str) -> "Assignment":
        if set(bits) - {"0", "1"}:
            raise InputError("bit string may only contain 0 and 1")
        return cls(tuple(b == "1" for b in bits))

    @property
    def num_vars(self) -> int:
        return len(self.values)

    def __getitem__(self, var: int) -> bool:
        if var < 1 or var > len(self.values):
            raise InputError(f"variable {var} is not defined by this assignment")
        return self.values[var - 1]

    def __len__(self):
        return len(self.values)

    def flipped(self, var: int) -> "Assignment":
        vals = list(self.values)
        vals[var - 1] = not self[var]
        return Assignment(tuple(vals))

    def bits(self) -> str:
        return "".join("1" if v else "0" for v in self.values)


def evaluate_clause(clause: Clause, m: Assignment) -> bool:
    for lit in clause.literals:
        if m[lit.variable] != lit.negated:
            return True
    return False


def cost(f: Formula, m: Assignment) -> int:
    """Total weight of the clauses of ``f`` left unsatisfied by ``m``."""
    if m.num_vars < f.num_vars:
        raise InputError(f"assignment covers {m.num_vars} of {f.num_vars} variables")
    return sum(c.weight for c in f.clauses if not evaluate_clause(c, m))


def score(f: Formula, m: Assignment) -> int:
    """Satisfied weight, ``total_weight - cost``."""
    return f.total_weight - cost(f, m)
