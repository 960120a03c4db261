# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled flip kernel; same contract and random stream as ``_pykernel``."""

from libc.string cimport memcpy
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

ctypedef unsigned long long u64
ctypedef long long i64

cdef enum:
    C_TRY = 0
    C_FLIP = 1
    C_FLIPS = 2
    C_BAD = 3
    C_BEST = 4
    C_BEST_FLIP = 5
    C_HARD_N = 6
    C_SOFT_N = 7
    C_TRACE_N = 8

cdef enum:
    TARGET_REACHED = 0
    BUDGET_EXHAUSTED = 1
    INTERRUPTED = 2
    YIELDED = 3
    SATISFIED = 4

cdef enum:
    TRACE_NONE = 0
    TRACE_IMPROVEMENTS = 1
    TRACE_FLIPS = 2

BACKEND = "cython"


cdef struct Core:
    int num_vars
    int num_slots
    unsigned char* values
    unsigned char* best_values
    int* lit_start
    int* lit_len
    int* lits
    i64* weight
    int* num_true
    int* where
    int* hard_list
    int* soft_list
    int* occ_start
    int* occ
    i64* scratch
    i64 hard_limit
    u64* rng
    i64* ctr
    double* fctr


cdef struct Trace:
    int mode
    i64 capacity
    i64* flip
    i64* cost
    double* time
    unsigned char* vals


cdef inline double now_s() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline u64 rotl(u64 x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline u64 next_u64(u64* s) noexcept nogil:
    cdef u64 result = rotl(s[1] * 5, 7) * 9
    cdef u64 t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = rotl(s[3], 45)
    return result


cdef inline i64 uniform(u64* s, i64 n) noexcept nogil:
    return <i64>(((next_u64(s) >> 32) * <u64>n) >> 32)


# Typed memoryviews of zero-length arrays cannot be indexed; hand out NULL.
cdef unsigned char* bptr(unsigned char[::1] a):
    return &a[0] if a.shape[0] else NULL

cdef int* iptr(int[::1] a):
    return &a[0] if a.shape[0] else NULL

cdef i64* qptr(i64[::1] a):
    return &a[0] if a.shape[0] else NULL

cdef double* dptr(double[::1] a):
    return &a[0] if a.shape[0] else NULL


cdef Core load(st) except *:
    cdef Core c
    c.num_vars = st.num_vars
    c.num_slots = len(st.lit_len)
    c.values = bptr(st.values)
    c.best_values = bptr(st.best_values)
    c.lit_start = iptr(st.lit_start)
    c.lit_len = iptr(st.lit_len)
    c.lits = iptr(st.lits)
    c.weight = qptr(st.weight)
    c.num_true = iptr(st.num_true)
    c.where = iptr(st.where)
    c.hard_list = iptr(st.hard_list)
    c.soft_list = iptr(st.soft_list)
    c.occ_start = iptr(st.occ_start)
    c.occ = iptr(st.occ)
    c.scratch = qptr(st.scratch)
    c.hard_limit = st.hard_limit
    cdef u64[::1] rng = st.rng
    c.rng = &rng[0]
    c.ctr = qptr(st.ctr)
    c.fctr = dptr(st.fctr)
    return c


cdef void c_randomize(Core* c) noexcept nogil:
    cdef int v
    for v in range(1, c.num_vars + 1):
        c.values[v] = <unsigned char>(next_u64(c.rng) >> 63)


cdef void c_rebuild(Core* c) noexcept nogil:
    cdef i64 hard_n = 0, soft_n = 0, bad = 0
    cdef int s, k, n, t, code
    for s in range(c.num_slots):
        c.where[s] = -1
        n = c.lit_len[s]
        if n == 0:
            c.num_true[s] = 0
            continue
        t = 0
        for k in range(c.lit_start[s], c.lit_start[s] + n):
            code = c.lits[k]
            if c.values[code >> 1] ^ (code & 1):
                t += 1
        c.num_true[s] = t
        if t == 0:
            bad += c.weight[s]
            if c.weight[s] >= c.hard_limit:
                c.where[s] = <int>hard_n
                c.hard_list[hard_n] = s
                hard_n += 1
            else:
                c.where[s] = <int>soft_n
                c.soft_list[soft_n] = s
                soft_n += 1
    c.ctr[C_BAD] = bad
    c.ctr[C_HARD_N] = hard_n
    c.ctr[C_SOFT_N] = soft_n


cdef inline void unsat_add(Core* c, int s) noexcept nogil:
    cdef i64 n
    if c.weight[s] >= c.hard_limit:
        n = c.ctr[C_HARD_N]
        c.hard_list[n] = s
        c.where[s] = <int>n
        c.ctr[C_HARD_N] = n + 1
    else:
        n = c.ctr[C_SOFT_N]
        c.soft_list[n] = s
        c.where[s] = <int>n
        c.ctr[C_SOFT_N] = n + 1


cdef inline void unsat_remove(Core* c, int s) noexcept nogil:
    cdef int pos = c.where[s]
    cdef int last
    if c.weight[s] >= c.hard_limit:
        last = c.hard_list[c.ctr[C_HARD_N] - 1]
        c.hard_list[pos] = last
        c.ctr[C_HARD_N] -= 1
    else:
        last = c.soft_list[c.ctr[C_SOFT_N] - 1]
        c.soft_list[pos] = last
        c.ctr[C_SOFT_N] -= 1
    c.where[last] = pos
    c.where[s] = -1


cdef inline i64 c_breakcount(Core* c, int v) noexcept nogil:
    cdef unsigned char val = c.values[v]
    cdef i64 bc = 0
    cdef int k, e, s
    for k in range(c.occ_start[v], c.occ_start[v + 1]):
        e = c.occ[k]
        s = e >> 1
        if c.num_true[s] == 1 and (val ^ (e & 1)):
            bc += c.weight[s]
    return bc


cdef inline int c_pick_clause(Core* c) noexcept nogil:
    cdef i64 n = c.ctr[C_HARD_N]
    if n:
        return c.hard_list[uniform(c.rng, n)]
    return c.soft_list[uniform(c.rng, c.ctr[C_SOFT_N])]


cdef inline int c_pick_var(Core* c, int s, u64 noise_thr) noexcept nogil:
    cdef int start = c.lit_start[s]
    cdef int n = c.lit_len[s]
    cdef int k
    cdef i64 bc, best = -1, count = 0, r
    if (next_u64(c.rng) >> 11) < noise_thr:
        return c.lits[start + uniform(c.rng, n)] >> 1
    for k in range(n):
        bc = c_breakcount(c, c.lits[start + k] >> 1)
        c.scratch[k] = bc
        if best < 0 or bc < best:
            best = bc
            count = 1
        elif bc == best:
            count += 1
    r = uniform(c.rng, count) if count > 1 else 0
    for k in range(n):
        if c.scratch[k] == best:
            if r == 0:
                return c.lits[start + k] >> 1
            r -= 1
    return -1


cdef inline void c_flip(Core* c, int v) noexcept nogil:
    cdef unsigned char nv = c.values[v] ^ 1
    cdef int k, e, s
    cdef i64 bad = c.ctr[C_BAD]
    c.values[v] = nv
    for k in range(c.occ_start[v], c.occ_start[v + 1]):
        e = c.occ[k]
        s = e >> 1
        if nv ^ (e & 1):
            c.num_true[s] += 1
            if c.num_true[s] == 1:
                unsat_remove(c, s)
                bad -= c.weight[s]
        else:
            c.num_true[s] -= 1
            if c.num_true[s] == 0:
                unsat_add(c, s)
                bad += c.weight[s]
    c.ctr[C_BAD] = bad


cdef inline void record_best(Core* c, Trace* tr, double t0) noexcept nogil:
    cdef i64 k
    cdef int width = c.num_vars + 1
    c.ctr[C_BEST] = c.ctr[C_BAD]
    c.ctr[C_BEST_FLIP] = c.ctr[C_FLIPS]
    memcpy(c.best_values, c.values, width)
    cdef double t = now_s() - t0
    c.fctr[0] = t
    if tr.mode == TRACE_IMPROVEMENTS:
        k = c.ctr[C_TRACE_N]
        tr.flip[k] = c.ctr[C_FLIPS]
        tr.cost[k] = c.ctr[C_BAD]
        tr.time[k] = t
        memcpy(tr.vals + k * width, c.values, width)
        c.ctr[C_TRACE_N] = k + 1


cdef int c_run(Core* c, Trace* tr, i64 max_tries, i64 max_flips, i64 target,
               u64 noise_thr, bint restart, i64 cap, double t0,
               volatile unsigned char* flags) noexcept nogil:
    cdef i64* ctr = c.ctr
    cdef i64 done = 0
    cdef int s, v
    while True:
        if ctr[C_TRY] >= max_tries:
            return BUDGET_EXHAUSTED
        if tr.mode != TRACE_NONE and ctr[C_TRACE_N] >= tr.capacity:
            return YIELDED
        if ctr[C_FLIP] >= max_flips:
            ctr[C_TRY] += 1
            ctr[C_FLIP] = 0
            if restart and ctr[C_TRY] < max_tries:
                c_randomize(c)
                c_rebuild(c)
                if ctr[C_BAD] < ctr[C_BEST]:
                    record_best(c, tr, t0)
            continue
        if ctr[C_BAD] < target:
            return TARGET_REACHED
        if flags[0]:
            return INTERRUPTED
        if flags[1] or (0 <= cap <= done):
            return YIELDED
        if ctr[C_HARD_N] + ctr[C_SOFT_N] == 0:
            return SATISFIED
        s = c_pick_clause(c)
        v = c_pick_var(c, s, noise_thr)
        c_flip(c, v)
        ctr[C_FLIP] += 1
        ctr[C_FLIPS] += 1
        done += 1
        if ctr[C_BAD] < ctr[C_BEST]:
            record_best(c, tr, t0)
        if tr.mode == TRACE_FLIPS:
            tr.flip[ctr[C_TRACE_N]] = ctr[C_FLIPS]
            tr.cost[ctr[C_TRACE_N]] = ctr[C_BAD]
            tr.time[ctr[C_TRACE_N]] = now_s() - t0
            ctr[C_TRACE_N] += 1


def randomize(st):
    cdef Core c = load(st)
    c_randomize(&c)


def rebuild(st):
    cdef Core c = load(st)
    c_rebuild(&c)


def breakcount(st, int v):
    cdef Core c = load(st)
    return c_breakcount(&c, v)


def pick_clause(st):
    cdef Core c = load(st)
    if c.ctr[C_HARD_N] + c.ctr[C_SOFT_N] == 0:
        raise ValueError("no unsatisfied clause to select")
    return c_pick_clause(&c)


def pick_var(st, int s, u64 noise_thr):
    cdef Core c = load(st)
    return c_pick_var(&c, s, noise_thr)


def flip(st, int v):
    cdef Core c = load(st)
    c_flip(&c, v)


def run(st, i64 max_tries, i64 max_flips, i64 target, u64 noise_thr, bint restart,
        i64 cap, int mode, trace, double t0, unsigned char[::1] flags):
    """Resume the try/flip loop; releases the GIL while flipping."""
    cdef Core c = load(st)
    cdef Trace tr
    tr.mode = mode
    tr.capacity = 0
    tr.flip = NULL
    tr.cost = NULL
    tr.time = NULL
    tr.vals = NULL
    if mode != TRACE_NONE:
        tr.capacity = trace.capacity
        tr.flip = qptr(trace.flip)
        tr.cost = qptr(trace.cost)
        tr.time = dptr(trace.time)
        tr.vals = bptr(trace.vals)
    cdef volatile unsigned char* fl = &flags[0]
    cdef int status
    with nogil:
        status = c_run(&c, &tr, max_tries, max_flips, target, noise_thr, restart, cap, t0, fl)
    return status
