import random
import time

import pytest

from conftest import small_formula
from dynsat.bench import random_instance
from dynsat.dwcsp import generate_sequence
from dynsat.dynamic import (
    AddEvent,
    DynamicSolver,
    RemoveEvent,
    ScriptError,
    SolveEvent,
    format_script,
    parse_script,
    run_script,
)
from dynsat.model import Assignment, Formula, InputError, cost
from dynsat.rng import derive_seed
from dynsat.solver import SolverParams, check_state, flip, init_state, run

P = SolverParams(max_tries=2, max_flips=500, seed=5)


def _two_var():
    f = Formula.build([(1, [1, 2])], hard_limit=100)
    return DynamicSolver(f, P, Assignment((True, False)))


def test_add_violated_clause():
    d = _two_var()
    bad = d.bad
    cid = d.add_constraint(7, [-1, 2])
    assert d.bad == bad + 7
    assert cid in d.state.soft_unsat and not d.state.hard_unsat
    assert d.remove_constraint(cid) == 7
    assert d.bad == bad and not d.state.soft_unsat


def test_add_satisfied_clause_and_hard_classification():
    d = _two_var()
    d.add_constraint(3, [1])
    assert d.bad == 0 and not d.state.soft_unsat
    hid = d.add_constraint(100, [-1])
    assert d.state.hard_unsat == {hid}


def test_add_new_variable_keeps_existing_values():
    d = _two_var()
    before = d.assignment
    d.add_constraint(2, [9, -3])
    assert d.assignment.num_vars == 9
    assert d.assignment.values[:2] == before.values
    check_state(d.state)


def test_ids_are_fresh_and_sequential():
    d = _two_var()
    assert d.next_clause_id == 2
    assert [d.add_constraint(1, [1]), d.add_constraint(1, [2])] == [2, 3]
    d.remove_constraint(2)
    assert d.add_constraint(1, [2]) == 4


def test_errors():
    d = _two_var()
    with pytest.raises(KeyError):
        d.remove_constraint(99)
    with pytest.raises(InputError):
        d.add_constraint(1, [])
    with pytest.raises(InputError):
        d.add_constraint(1, [2, -2])
    with pytest.raises(InputError):
        d.add_constraint(0, [1])


def test_remove_satisfied_clause():
    d = _two_var()
    cid = d.add_constraint(4, [1, -2])
    bad = d.bad
    d.remove_constraint(cid)
    assert d.bad == bad


def test_add_remove_identity():
    f = small_formula(3, num_vars=20, num_clauses=60)
    d = DynamicSolver(f, P)
    snap = (d.assignment, d.bad, d.state.hard_unsat, d.state.soft_unsat)
    cid = d.add_constraint(5, [-3, 4, 17])
    d.remove_constraint(cid)
    assert (d.assignment, d.bad, d.state.hard_unsat, d.state.soft_unsat) == snap


def test_interleaved_operations_consistent():
    r = random.Random(1)
    f = small_formula(1, num_vars=50, num_clauses=150, hard_fraction=0.1)
    s = init_state(f, P)
    live = list(s.clause_ids())
    for _ in range(1000):
        op = r.random()
        if op < 0.35:
            vs = r.sample(range(1, 51), r.randint(1, 3))
            live.append(s.add_clause(r.choice([r.randint(1, 10), f.hard_limit]),
                                     [v if r.random() < 0.5 else -v for v in vs]))
        elif op < 0.65 and live:
            s.remove_clause(live.pop(r.randrange(len(live))))
        else:
            flip(s, r.randint(1, 50))
        check_state(s)
        assert s.bad == cost(s.formula, s.assignment)


def test_orphaned_variables_do_not_affect_cost():
    f = Formula.build([(3, [1, 2]), (4, [-2, 3]), (2, [3])])
    d = DynamicSolver(f, P)
    d.remove_constraint(1)
    d.remove_constraint(2)
    without = Formula(3, (f.clauses[2],), f.hard_limit)
    assert d.bad == cost(without, d.assignment)
    assert sorted(d.state.occurrence_index[2]) == []


def test_resolve_target_met():
    d = DynamicSolver(Formula.build([(1, [1])]), P.replace(target=5))
    rep = d.resolve()
    assert rep.terminated_by == "target_reached" and rep.flips_performed == 0


def test_resolve_repairs_new_unit_clause():
    f = Formula.build([(1, [1, 2]), (1, [2, 3])])
    d = DynamicSolver(f, SolverParams(max_tries=1, max_flips=1000, seed=1),
                      Assignment((True, True, True)))
    d.add_constraint(5, [-1])
    entry = d.bad
    rep = d.resolve()
    assert entry == 5 and rep.best_cost < entry and rep.best_cost == 0


def test_resolve_resets_counters_and_keeps_assignment():
    f = small_formula(8, num_vars=12, num_clauses=40)
    d = DynamicSolver(f, SolverParams(max_tries=2, max_flips=100, seed=3))
    d.resolve()
    m = d.assignment
    d.add_constraint(2, [1, 2])
    assert d.assignment == m
    rep = d.resolve()
    if rep.terminated_by == "budget_exhausted":
        assert rep.flips_performed == 200
    else:
        assert rep.flips_performed < 200
    check_state(d.state)


def test_script_roundtrip_and_errors():
    text = "c demo\nadd 3 1 -2 0\nremove 1\nsolve\n"
    events = parse_script(text)
    assert events == [AddEvent(3, (1, -2)), RemoveEvent(1), SolveEvent()]
    assert format_script(events, ["demo"]) == text
    for bad, line in [("add 3 1 -2\n", 1), ("solve\nadd 0 1 0\n", 2), ("remove\n", 1),
                      ("remove x\n", 1), ("jump 3\n", 1), ("solve 1\n", 1), ("add 3 0\n", 1)]:
        with pytest.raises(ScriptError) as info:
            parse_script(bad)
        assert info.value.line == line


def test_run_script_reports_per_solve():
    f = Formula.build([(1, [1, 2])])
    d = DynamicSolver(f, P)
    reps = run_script(d, parse_script("solve\nadd 4 -1 0\nadd 4 -2 0\nsolve\nremove 2\nsolve\n"))
    assert len(reps) == 3
    assert reps[1].best_cost == 1 and reps[2].best_cost == 0
    assert d.formula.clause(3).dimacs() == (-2,)


def test_warm_reaches_restart_final_score_faster():
    """On 20 addition events warm resolve matches a restart's final score in less time."""
    wins = events = 0
    for k in range(10):
        seq = generate_sequence(random_instance(60, 400, seed=100 + k), 100)
        forms = seq.formulas()
        p = SolverParams(max_flips=20000, max_tries=10, seed=k)
        d = DynamicSolver(seq.initial, p)
        d.resolve()
        for e, g in zip(seq.events[:2], forms[1:3]):
            t0 = time.monotonic()
            cold = run(init_state(g, p.replace(seed=derive_seed(k, events))), p)
            t_cold = time.monotonic() - t0
            d.params = p.replace(target=cold.final_cost + 1)
            t0 = time.monotonic()
            for c in e.clauses:
                d.add_constraint(c.weight, c.literals)
            warm = d.resolve()
            t_warm = time.monotonic() - t0
            d.params = p
            assert warm.final_cost <= cold.final_cost or warm.terminated_by == "budget_exhausted"
            events += 1
            wins += t_warm < t_cold
    assert events == 20
    assert wins > events // 2
