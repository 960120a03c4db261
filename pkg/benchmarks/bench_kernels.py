"""Flip throughput of the pure-Python and compiled kernels on the same problem.

    python benchmarks/bench_kernels.py --flips 200000 --repeat 3
"""
import argparse
import time

from dynsat import kernel
from dynsat.bench import random_instance
from dynsat.solver import SolverParams, init_state, run


def measure(backend, f, p, repeat):
    best = float("inf")
    final = None
    for _ in range(repeat):
        s = init_state(f, p)
        t0 = time.perf_counter()
        rep = run(s, p, backend=backend)
        best = min(best, time.perf_counter() - t0)
        final = (rep.final_cost, rep.best_cost, rep.flips_performed)
    return best, final


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--num-vars", type=int, default=60)
    ap.add_argument("--num-clauses", type=int, default=400)
    ap.add_argument("--flips", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    f = random_instance(args.num_vars, args.num_clauses, seed=args.seed)
    p = SolverParams(max_tries=1, max_flips=args.flips, seed=args.seed)
    results = {}
    for backend in kernel.backends():
        results[backend.BACKEND] = measure(backend, f, p, args.repeat)
    print(f"{'backend':<8} {'seconds':>9} {'flips/s':>12}  (final, best, flips)")
    for name, (secs, final) in results.items():
        print(f"{name:<8} {secs:9.4f} {final[2] / secs:12.0f}  {final}")
    if len(results) == 2:
        (_, (py_s, py_f)), (_, (c_s, c_f)) = results.items()
        print(f"speedup {py_s / c_s:.1f}x, trajectories {'match' if py_f == c_f else 'DIFFER'}")
    elif kernel.compiled is None:
        print("compiled kernel not available; only the Python backend was measured")


if __name__ == "__main__":
    main()
