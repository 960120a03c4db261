import threading
import time

import pytest

from conftest import small_formula
from dynsat import anytime
from dynsat.anytime import AddClause, AnytimeHandle, RemoveClause
from dynsat.model import Formula, cost
from dynsat.solver import SolverParams, init_state

LONG = SolverParams(max_tries=1000, max_flips=100_000, seed=3)
FRUSTRATED = Formula.build([(3, [1]), (5, [-1])])


def test_initial_record_is_initial_assignment():
    f = small_formula(1, num_vars=12, num_clauses=40)
    h = AnytimeHandle(f, LONG)
    rec = h.snapshot()
    assert rec is h.initial
    assert rec.assignment == init_state(f, LONG).assignment
    assert rec.cost == cost(f, rec.assignment) and rec.flips_at == 0 and rec.found_at == 0.0


def test_empty_formula_completes():
    h = anytime.start(Formula(0, (), 1), LONG)
    rep = h.wait(5)
    assert h.done and rep.best_cost == 0 and h.snapshot().cost == 0


def test_zero_budget_keeps_initial():
    f = small_formula(2)
    h = anytime.start(f, SolverParams(max_tries=0, max_flips=0, seed=1))
    rep = h.wait(5)
    assert rep.flips_performed == 0
    assert h.snapshot() == h.initial and rep.best_cost == h.initial.cost


def test_snapshots_monotone_and_consistent():
    f = small_formula(4, num_vars=40, num_clauses=200)
    h = anytime.start(f, SolverParams(max_tries=5, max_flips=50_000, seed=2), chunk=256)
    seen = []
    while not h.done:
        seen.append(h.snapshot())
    rep = h.wait()
    seen.append(h.snapshot())
    costs = [r.cost for r in seen]
    assert costs == sorted(costs, reverse=True)
    assert seen[-1].cost == rep.best_cost and seen[-1].assignment == rep.best_assignment
    for r in h.history():
        assert r.cost == cost(f, r.assignment)
    hist = [r.cost for r in h.history()]
    assert hist == sorted(hist, reverse=True)


def test_best_at_lookups():
    f = small_formula(4, num_vars=40, num_clauses=200)
    h = anytime.start(f, SolverParams(max_tries=2, max_flips=20_000, seed=2))
    h.wait()
    assert h.best_at(0.0) == h.initial == h.best_at_flips(0)
    assert h.best_at(1e9) == h.snapshot() == h.best_at_flips(10**12)
    times = [r.found_at for r in h.history()]
    assert times == sorted(times)
    mid = h.history()[len(h.history()) // 2]
    assert h.best_at_flips(mid.flips_at) == mid


def test_flip_basis_is_deterministic():
    f = small_formula(4, num_vars=40, num_clauses=200)
    p = SolverParams(max_tries=2, max_flips=20_000, seed=9)
    runs = []
    for _ in range(2):
        h = anytime.start(f, p, chunk=333)
        h.wait()
        runs.append([(r.cost, r.flips_at, r.assignment) for r in h.history()])
    assert runs[0] == runs[1]


def test_interrupt_idempotent_and_prompt():
    f = small_formula(5, num_vars=40, num_clauses=200)
    h = anytime.start(f, LONG)
    time.sleep(0.02)
    a = h.interrupt()
    b = h.interrupt()
    assert a is b and a.terminated_by == "interrupted"
    assert h.flips_after_interrupt is not None and h.flips_after_interrupt <= 1
    assert a.best_cost <= h.initial.cost
    assert a.best_cost == cost(f, a.best_assignment)


def test_interrupt_before_first_flip():
    f = small_formula(5, num_vars=20, num_clauses=80)
    h = AnytimeHandle(f, LONG)
    h._flags[0] = 1
    h._stop_flips = 0
    h._thread.start()
    rep = h.wait(5)
    assert rep.flips_performed == 0 and h.snapshot() == h.initial
    assert rep.best_cost == h.initial.cost


def test_concurrent_readers():
    f = small_formula(6, num_vars=40, num_clauses=200)
    h = anytime.start(f, SolverParams(max_tries=3, max_flips=50_000, seed=4), chunk=128)
    bad = []

    def reader():
        last = None
        while not h.done:
            r = h.snapshot()
            if r.cost != cost(f, r.assignment) or (last is not None and r.cost > last):
                bad.append(r)
            last = r.cost

    threads = [threading.Thread(target=reader) for _ in range(3)]
    for t in threads:
        t.start()
    h.wait()
    for t in threads:
        t.join()
    assert not bad


def test_edit_add_and_remove():
    h = anytime.start(FRUSTRATED, LONG)
    ack = h.edit(AddClause(7, (2,))).result(5)
    rec = ack.record
    assert ack.value == 3 and rec.epoch == 1
    assert rec.formula.clause(3).weight == 7
    assert rec.cost == cost(rec.formula, rec.assignment)
    under_old = cost(FRUSTRATED, rec.assignment)
    assert rec.cost - under_old == (0 if rec.assignment[2] else 7)
    ack2 = h.edit(RemoveClause(3)).result(5)
    assert ack2.value == 7 and ack2.record.epoch == 2
    assert ack2.record.formula.clauses == FRUSTRATED.clauses
    assert ack2.record.cost == cost(FRUSTRATED, ack2.record.assignment)
    h.interrupt()


def test_edits_fifo_and_unknown_id():
    h = anytime.start(FRUSTRATED, LONG)
    futs = [h.edit(AddClause(1, (v,))) for v in (2, 3, 4)]
    assert [f.result(5).value for f in futs] == [3, 4, 5]
    with pytest.raises(KeyError):
        h.edit(RemoveClause(99)).result(5)
    rep = h.interrupt()
    assert rep.terminated_by == "interrupted"
    with pytest.raises(RuntimeError):
        h.edit(AddClause(1, (1,)))


def test_epoch_best_reseeded():
    h = anytime.start(FRUSTRATED, LONG)
    time.sleep(0.01)
    ack = h.edit(AddClause(50, (-2,))).result(5)
    later = [r for r in h.history() if r.epoch == 1]
    assert later[0] is ack.record
    assert all(r.cost <= ack.record.cost for r in later)
    h.interrupt()
    assert h.snapshot().cost == cost(h.snapshot().formula, h.snapshot().assignment)


def test_module_functions():
    f = small_formula(7)
    h = anytime.start(f, SolverParams(max_tries=1, max_flips=100, seed=1))
    h.wait()
    assert anytime.snapshot(h) == h.snapshot()
    assert anytime.interrupt(h) is h.wait()
    with pytest.raises(RuntimeError):
        anytime.edit(h, RemoveClause(1))
