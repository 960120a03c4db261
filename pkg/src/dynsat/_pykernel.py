"""Pure-Python flip kernel.

Operates in place on the flat arrays owned by ``SolverState``; the Cython
module ``_ckernel`` implements the same functions over the same arrays and
must consume the random stream identically.

Array layout (slot = internal clause index, var = 1..num_vars):

    values[var]          current truth value (0/1)
    lit_start/lit_len    slice of ``lits`` for each slot; lit_len 0 = free slot
    lits[k]              var * 2 + negated
    occ_start[var]..     CSR slice of ``occ`` for each var
    occ[k]               slot * 2 + negated
    num_true[slot]       number of true literals
    where[slot]          position in hard_list/soft_list, -1 when satisfied
    ctr                  see the C_* indices below
"""
from __future__ import annotations

import time

from .rng import MASK64

C_TRY, C_FLIP, C_FLIPS, C_BAD, C_BEST, C_BEST_FLIP, C_HARD_N, C_SOFT_N, C_TRACE_N = range(9)
N_CTR = 9

TARGET_REACHED, BUDGET_EXHAUSTED, INTERRUPTED, YIELDED, SATISFIED = range(5)

TRACE_NONE, TRACE_IMPROVEMENTS, TRACE_FLIPS = range(3)

BACKEND = "python"


def _next(s):
    s0, s1, s2, s3 = s[0], s[1], s[2], s[3]
    x = (s1 * 5) & MASK64
    result = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
    t = (s1 << 17) & MASK64
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s[0], s[1], s[2], s[3] = s0, s1, s2, ((s3 << 45) | (s3 >> 19)) & MASK64
    return result


def randomize(st, first=1):
    values, rng = st.values, st.rng
    for v in range(first, st.num_vars + 1):
        values[v] = _next(rng) >> 63


def rebuild(st):
    """Recompute num_true, unsat lists and bad from the current values."""
    values, lit_start, lit_len, lits = st.values, st.lit_start, st.lit_len, st.lits
    weight, num_true, where = st.weight, st.num_true, st.where
    hard_list, soft_list, hard_limit = st.hard_list, st.soft_list, st.hard_limit
    hard_n = soft_n = bad = 0
    for s in range(len(lit_len)):
        where[s] = -1
        n = lit_len[s]
        if n == 0:
            num_true[s] = 0
            continue
        start = lit_start[s]
        t = 0
        for k in range(start, start + n):
            code = lits[k]
            if values[code >> 1] ^ (code & 1):
                t += 1
        num_true[s] = t
        if t == 0:
            bad += weight[s]
            if weight[s] >= hard_limit:
                where[s] = hard_n
                hard_list[hard_n] = s
                hard_n += 1
            else:
                where[s] = soft_n
                soft_list[soft_n] = s
                soft_n += 1
    ctr = st.ctr
    ctr[C_BAD] = bad
    ctr[C_HARD_N] = hard_n
    ctr[C_SOFT_N] = soft_n


def unsat_add(st, s):
    ctr = st.ctr
    if st.weight[s] >= st.hard_limit:
        n = ctr[C_HARD_N]
        st.hard_list[n] = s
        st.where[s] = n
        ctr[C_HARD_N] = n + 1
    else:
        n = ctr[C_SOFT_N]
        st.soft_list[n] = s
        st.where[s] = n
        ctr[C_SOFT_N] = n + 1


def unsat_remove(st, s):
    ctr, where = st.ctr, st.where
    pos = where[s]
    if st.weight[s] >= st.hard_limit:
        lst, key = st.hard_list, C_HARD_N
    else:
        lst, key = st.soft_list, C_SOFT_N
    last = lst[ctr[key] - 1]
    lst[pos] = last
    where[last] = pos
    ctr[key] -= 1
    where[s] = -1


def breakcount(st, v):
    values, occ, num_true, weight = st.values, st.occ, st.num_true, st.weight
    val = values[v]
    bc = 0
    for k in range(st.occ_start[v], st.occ_start[v + 1]):
        e = occ[k]
        s = e >> 1
        if num_true[s] == 1 and val ^ (e & 1):
            bc += weight[s]
    return bc


def pick_clause(st):
    ctr = st.ctr
    n = ctr[C_HARD_N]
    if n:
        return st.hard_list[((_next(st.rng) >> 32) * n) >> 32]
    n = ctr[C_SOFT_N]
    if not n:
        raise ValueError("no unsatisfied clause to select")
    return st.soft_list[((_next(st.rng) >> 32) * n) >> 32]


def pick_var(st, s, noise_thr):
    rng, lits = st.rng, st.lits
    start, n = st.lit_start[s], st.lit_len[s]
    if (_next(rng) >> 11) < noise_thr:
        return lits[start + (((_next(rng) >> 32) * n) >> 32)] >> 1
    scratch = st.scratch
    best = -1
    count = 0
    for k in range(n):
        bc = breakcount(st, lits[start + k] >> 1)
        scratch[k] = bc
        if best < 0 or bc < best:
            best = bc
            count = 1
        elif bc == best:
            count += 1
    r = ((_next(rng) >> 32) * count) >> 32 if count > 1 else 0
    for k in range(n):
        if scratch[k] == best:
            if r == 0:
                return lits[start + k] >> 1
            r -= 1
    raise AssertionError("unreachable")


def flip(st, v):
    values, occ, num_true, weight, ctr = st.values, st.occ, st.num_true, st.weight, st.ctr
    nv = values[v] ^ 1
    values[v] = nv
    bad = ctr[C_BAD]
    for k in range(st.occ_start[v], st.occ_start[v + 1]):
        e = occ[k]
        s = e >> 1
        if nv ^ (e & 1):
            num_true[s] += 1
            if num_true[s] == 1:
                unsat_remove(st, s)
                bad -= weight[s]
        else:
            num_true[s] -= 1
            if num_true[s] == 0:
                unsat_add(st, s)
                bad += weight[s]
    ctr[C_BAD] = bad


def _record_best(st, mode, trace, t0):
    ctr = st.ctr
    ctr[C_BEST] = ctr[C_BAD]
    ctr[C_BEST_FLIP] = ctr[C_FLIPS]
    st.best_values[:] = st.values
    now = time.monotonic() - t0
    st.fctr[0] = now
    if mode == TRACE_IMPROVEMENTS:
        k = ctr[C_TRACE_N]
        trace.flip[k] = ctr[C_FLIPS]
        trace.cost[k] = ctr[C_BAD]
        trace.time[k] = now
        width = st.num_vars + 1
        trace.vals[k * width:(k + 1) * width] = st.values
        ctr[C_TRACE_N] = k + 1


def run(st, max_tries, max_flips, target, noise_thr, restart, cap, mode, trace, t0, flags):
    """Resume the try/flip loop from the counters in ``st.ctr``."""
    ctr = st.ctr
    trace_cap = trace.capacity if mode != TRACE_NONE else 0
    done = 0
    while True:
        if ctr[C_TRY] >= max_tries:
            return BUDGET_EXHAUSTED
        if mode != TRACE_NONE and ctr[C_TRACE_N] >= trace_cap:
            return YIELDED
        if ctr[C_FLIP] >= max_flips:
            ctr[C_TRY] += 1
            ctr[C_FLIP] = 0
            if restart and ctr[C_TRY] < max_tries:
                randomize(st)
                rebuild(st)
                if ctr[C_BAD] < ctr[C_BEST]:
                    _record_best(st, mode, trace, t0)
            continue
        if ctr[C_BAD] < target:
            return TARGET_REACHED
        if flags[0]:
            return INTERRUPTED
        if flags[1] or (0 <= cap <= done):
            return YIELDED
        if ctr[C_HARD_N] + ctr[C_SOFT_N] == 0:
            return SATISFIED
        s = pick_clause(st)
        v = pick_var(st, s, noise_thr)
        flip(st, v)
        ctr[C_FLIP] += 1
        ctr[C_FLIPS] += 1
        done += 1
        if ctr[C_BAD] < ctr[C_BEST]:
            _record_best(st, mode, trace, t0)
        if mode == TRACE_FLIPS:
            k = ctr[C_TRACE_N]
            trace.flip[k] = ctr[C_FLIPS]
            trace.cost[k] = ctr[C_BAD]
            trace.time[k] = time.monotonic() - t0
            ctr[C_TRACE_N] = k + 1
