"""Primal constraint graphs in Graphviz DOT."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from .model import Formula


@dataclass(frozen=True)
class ConstraintGraph:
    nodes: tuple[int, ...]
    edges: dict[tuple[int, int], int]  # (u, v) with u < v -> summed clause weight
    unary: dict[int, int]  # variable -> summed weight of unit clauses
    kary_clauses: int = 0


def constraint_graph(f: Formula) -> ConstraintGraph:
    edges: dict[tuple[int, int], int] = defaultdict(int)
    unary: dict[int, int] = defaultdict(int)
    kary = 0
    for c in f.clauses:
        vs = sorted(c.variables)
        if len(vs) == 1:
            unary[vs[0]] += c.weight
            continue
        if len(vs) > 2:
            kary += 1
        for u, v in combinations(vs, 2):
            edges[(u, v)] += c.weight
    return ConstraintGraph(
        nodes=tuple(range(1, f.num_vars + 1)),
        edges=dict(sorted(edges.items())),
        unary=dict(sorted(unary.items())),
        kary_clauses=kary,
    )


def to_dot(f: Formula, name: str = "constraints") -> str:
    g = constraint_graph(f)
    out = [f"graph {name} {{\n"]
    if g.kary_clauses:
        out.append(f"  // {g.kary_clauses} clauses with more than two variables drawn as cliques\n")
    for v in g.nodes:
        if v in g.unary:
            out.append(f"  v{v} [unary_weight={g.unary[v]}];\n")
        else:
            out.append(f"  v{v};\n")
    for (u, v), w in g.edges.items():
        out.append(f"  v{u} -- v{v} [weight={w}];\n")
    out.append("}\n")
    return "".join(out)
