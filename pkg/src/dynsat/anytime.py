"""RDMaxWalkSat: the dynamic solver as an interruptible background search.

A worker thread runs the flip kernel in short chunks. Between chunks it
publishes every best-so-far improvement the kernel logged and applies queued
edits. Readers only ever see published, immutable :class:`BestRecord`
objects, so snapshots are never torn and never pause the search.

Each edit starts a new *epoch*: the best record is re-seeded from the current
assignment under the edited formula, since an older best may violate it.
"""
from __future__ import annotations

import bisect
import threading
import time
from concurrent.futures import Future
from dataclasses import dataclass, field

from . import kernel
from .kernel import (
    C_BEST,
    C_BEST_FLIP,
    C_FLIP,
    C_FLIPS,
    C_TRACE_N,
    C_TRY,
    INTERRUPTED,
    TRACE_IMPROVEMENTS,
    YIELDED,
    Trace,
)
from .model import Assignment, Formula, Literal
from .rng import noise_threshold
from .solver import SolveReport, SolverParams, init_state, make_report

DEFAULT_CHUNK = 2048
LOG_CAPACITY = 256


@dataclass(frozen=True)
class BestRecord:
    assignment: Assignment
    cost: int
    found_at: float
    flips_at: int
    epoch: int = 0
    formula: Formula | None = field(default=None, repr=False, compare=False)

    @property
    def score(self) -> int:
        return self.formula.total_weight - self.cost


@dataclass(frozen=True)
class AddClause:
    weight: int
    literals: tuple[Literal | int, ...]


@dataclass(frozen=True)
class RemoveClause:
    clause_id: int


@dataclass(frozen=True)
class EditAck:
    """``value`` is the new clause id for an add, the removed weight for a remove."""

    value: int
    record: BestRecord


class AnytimeHandle:
    def __init__(self, f: Formula, p: SolverParams, chunk: int = DEFAULT_CHUNK):
        self.params = p
        self.chunk = chunk
        self._state = init_state(f, p)
        self._thr = noise_threshold(p.noise)
        self._flags = bytearray(2)
        self._lock = threading.Lock()
        self._edits: list[tuple[object, Future]] = []
        self._done = threading.Event()
        self._completed = False
        self._report: SolveReport | None = None
        self._epoch = 0
        self._stop_flips: int | None = None
        self.flips_after_interrupt: int | None = None
        self._t0 = time.monotonic()
        st = self._state
        self.initial = BestRecord(st.assignment, st.bad, 0.0, 0, 0, st.formula)
        self._latest = self.initial
        self._history = [self.initial]
        self._times = [0.0]
        self._flips = [0]
        self._thread = threading.Thread(target=self._work, name="rdmaxwalksat", daemon=True)

    # -- worker --------------------------------------------------------------

    def _publish(self, trace: Trace):
        st = self._state
        n = st.ctr[C_TRACE_N]
        if not n:
            return
        f = st.formula
        w = trace.width
        recs = []
        for k in range(n):
            vals = trace.vals[k * w + 1:(k + 1) * w]
            recs.append(BestRecord(Assignment(tuple(vals)), trace.cost[k], trace.time[k],
                                   trace.flip[k], self._epoch, f))
        st.ctr[C_TRACE_N] = 0
        with self._lock:
            self._history.extend(recs)
            self._times.extend(r.found_at for r in recs)
            self._flips.extend(r.flips_at for r in recs)
            self._latest = recs[-1]

    def _apply(self, op) -> int:
        st = self._state
        if isinstance(op, AddClause):
            return st.add_clause(op.weight, op.literals)
        if isinstance(op, RemoveClause):
            return st.remove_clause(op.clause_id)
        raise TypeError(f"unsupported edit {op!r}")

    def _drain_edits(self) -> bool:
        with self._lock:
            pending, self._edits = self._edits, []
            self._flags[1] = 0
        if not pending:
            return False
        st = self._state
        for op, fut in pending:
            try:
                value = self._apply(op)
            except Exception as exc:  # reported through the future
                fut.set_exception(exc)
                continue
            st.ctr[C_TRY] = st.ctr[C_FLIP] = 0
            st.ctr[C_BEST] = st.bad
            st.ctr[C_BEST_FLIP] = st.ctr[C_FLIPS]
            st.best_values[:] = st.values
            self._epoch += 1
            rec = BestRecord(st.assignment, st.bad, time.monotonic() - self._t0,
                             st.flips, self._epoch, st.formula)
            with self._lock:
                self._history.append(rec)
                self._times.append(rec.found_at)
                self._flips.append(rec.flips_at)
                self._latest = rec
            fut.set_result(EditAck(value, rec))
        st._sync()
        return True

    def _work(self):
        st = self._state
        p = self.params
        k = kernel.active
        trace = Trace(LOG_CAPACITY, st.num_vars)
        while True:
            if self._drain_edits() and trace.width != st.num_vars + 1:
                trace = Trace(LOG_CAPACITY, st.num_vars)
            if self._flags[0]:
                status = INTERRUPTED
                break
            status = k.run(st, p.max_tries, p.max_flips, p.target, self._thr,
                           p.restart_each_try, self.chunk, TRACE_IMPROVEMENTS, trace,
                           self._t0, self._flags)
            self._publish(trace)
            if status == YIELDED:
                continue
            if status == INTERRUPTED:
                break
            with self._lock:
                if not self._edits:
                    self._completed = True
                    break
        with self._lock:
            self._completed = True
            leftover, self._edits = self._edits, []
        for _, fut in leftover:
            fut.set_exception(RuntimeError("search finished before the edit was applied"))
        if self._stop_flips is not None:
            self.flips_after_interrupt = st.flips - self._stop_flips
        st.ctr[C_BEST] = self._latest.cost
        self._report = make_report(st, p, status, time.monotonic() - self._t0)
        self._report = _with_best(self._report, self._latest)
        self._done.set()

    # -- public API --------------------------------------------------------

    def snapshot(self) -> BestRecord:
        return self._latest

    def history(self) -> list[BestRecord]:
        with self._lock:
            return list(self._history)

    def best_at(self, t: float) -> BestRecord:
        """The best record published at or before ``t`` seconds after start."""
        with self._lock:
            k = bisect.bisect_right(self._times, t)
            return self._history[max(k - 1, 0)]

    def best_at_flips(self, n: int) -> BestRecord:
        """The best record published at or before flip ``n``; deterministic for a seed."""
        with self._lock:
            k = bisect.bisect_right(self._flips, n)
            return self._history[max(k - 1, 0)]

    @property
    def done(self) -> bool:
        return self._done.is_set()

    @property
    def flips(self) -> int:
        return self._state.ctr[C_FLIPS]

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self._t0

    def wait(self, timeout: float | None = None) -> SolveReport | None:
        self._done.wait(timeout)
        return self._report

    def interrupt(self) -> SolveReport:
        """Stop the search (idempotent) and return the report with the best-so-far."""
        with self._lock:
            if not self._completed and self._stop_flips is None:
                self._flags[0] = 1
                self._stop_flips = self._state.ctr[C_FLIPS]
        self._done.wait()
        return self._report

    def edit(self, op: AddClause | RemoveClause) -> Future:
        """Queue an edit to be applied between flips; resolves to an :class:`EditAck`."""
        fut: Future = Future()
        with self._lock:
            if self._completed:
                raise RuntimeError("search already finished")
            self._edits.append((op, fut))
            self._flags[1] = 1
        return fut


def _with_best(report: SolveReport, rec: BestRecord) -> SolveReport:
    from dataclasses import replace

    return replace(report, best_cost=rec.cost, best_assignment=rec.assignment)


def start(f: Formula, p: SolverParams, chunk: int = DEFAULT_CHUNK) -> AnytimeHandle:
    """Begin solving ``f`` in the background."""
    h = AnytimeHandle(f, p, chunk)
    h._thread.start()
    return h


def snapshot(h: AnytimeHandle) -> BestRecord:
    return h.snapshot()


def interrupt(h: AnytimeHandle) -> SolveReport:
    return h.interrupt()


def edit(h: AnytimeHandle, op: AddClause | RemoveClause) -> Future:
    return h.edit(op)
