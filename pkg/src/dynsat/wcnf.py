"""Reader and writer for the DIMACS weighted CNF dialect.

Grammar::

    c <free text>            comment, allowed anywhere
    p wcnf <NV> <NC> <TOP>   header, exactly once, before the first clause
    <W> <l1> ... <lk> 0      clause, W >= 1, k >= 1, literals nonzero

A clause with ``W >= TOP`` is hard.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .model import Clause, Formula, InputError


class WcnfParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class WcnfDocument:
    num_vars: int
    num_clauses: int
    top_weight: int
    body: Formula
    comment_lines: tuple[str, ...] = field(default=())

    @property
    def header(self) -> tuple[int, int, int]:
        return self.num_vars, self.num_clauses, self.top_weight


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise WcnfParseError(f"{what} is not an integer: {tok!r}", lineno) from None


def read_wcnf(text: str | Iterable[str]) -> WcnfDocument:
    lines = text.splitlines() if isinstance(text, str) else text
    header = None
    comments = []
    clauses = []
    for lineno, raw in enumerate(lines, start=1):
        toks = raw.split()
        if not toks:
            continue
        if toks[0].startswith("c"):
            comments.append(raw.rstrip("\r\n"))
            continue
        if toks[0] == "p":
            if header is not None:
                raise WcnfParseError("duplicate header", lineno)
            if len(toks) != 5 or toks[1] != "wcnf":
                raise WcnfParseError(f"expected 'p wcnf NV NC TOP', got {raw.strip()!r}", lineno)
            nv, nc, top = (_int(t, lineno, "header field") for t in toks[2:])
            if nv < 0 or nc < 0 or top < 1:
                raise WcnfParseError("header fields out of range", lineno)
            header = (nv, nc, top)
            continue
        if header is None:
            raise WcnfParseError("clause before header", lineno)
        nums = [_int(t, lineno, "clause field") for t in toks]
        weight = nums[0]
        if weight < 1:
            raise WcnfParseError(f"weight must be >= 1, got {weight}", lineno)
        if nums[-1] != 0 or len(nums) < 2:
            raise WcnfParseError("clause must end with 0", lineno)
        lits = nums[1:-1]
        if not lits:
            raise WcnfParseError("empty clause", lineno)
        if 0 in lits:
            raise WcnfParseError("literal 0 inside clause", lineno)
        for lit in lits:
            if abs(lit) > header[0]:
                raise WcnfParseError(f"variable {abs(lit)} exceeds declared {header[0]}", lineno)
        try:
            clauses.append(Clause(len(clauses) + 1, weight, tuple(lits)))
        except InputError as exc:
            raise WcnfParseError(str(exc), lineno) from None
    if header is None:
        raise WcnfParseError("missing 'p wcnf' header")
    nv, nc, top = header
    if nc != len(clauses):
        raise WcnfParseError(f"clause-count mismatch: header declares {nc}, found {len(clauses)}")
    try:
        body = Formula(nv, tuple(clauses), top)
    except InputError as exc:
        raise WcnfParseError(str(exc)) from None
    return WcnfDocument(nv, nc, top, body, tuple(comments))


def parse_wcnf(text: str | Iterable[str]) -> Formula:
    return read_wcnf(text).body


def write_wcnf(f: Formula, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}\n" for c in comments]
    out.append(f"p wcnf {f.num_vars} {len(f.clauses)} {f.hard_limit}\n")
    for c in f.clauses:
        out.append(" ".join(map(str, (c.weight, *c.dimacs(), 0))) + "\n")
    return "".join(out)


def load(path: str | Path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_wcnf(fh)


def dump(f: Formula, path: str | Path) -> None:
    Path(path).write_text(write_wcnf(f), encoding="utf-8", newline="\n")
