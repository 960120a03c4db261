"""Measurement harness: control timings, warm-vs-cold velocities, anytime thresholds.

Instances come from a small random generator of weighted partial 2-SAT
formulas so that every experiment can be regenerated from a seed. Timing uses
``time.monotonic``; absolute times are machine-bound and only ever reported.
"""
from __future__ import annotations

import csv
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Sequence

from . import anytime
from .dwcsp import COLD, WARM, DwcspSequence, EventReport, generate_sequence, replay
from .model import Formula, InputError
from .rng import derive_seed
from .solver import SolverParams, init_state, run, solve

FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def random_instance(
    num_vars: int = 60,
    num_clauses: int = 400,
    clause_size: int | tuple[int, int] = 2,
    max_weight: int = 10,
    hard_fraction: float = 0.1,
    seed: int = 0,
) -> Formula:
    """Random weighted partial MAX-SAT instance.

    Soft weights are uniform in ``1..max_weight``. Each clause is hard with
    probability ``hard_fraction``; hard clauses get the top weight, one more
    than the sum of all soft weights. ``clause_size`` is a fixed size or an
    inclusive ``(lo, hi)`` range, clipped to ``num_vars``.
    """
    if num_vars < 1 or num_clauses < 0:
        raise InputError("need num_vars >= 1 and num_clauses >= 0")
    lo, hi = (clause_size, clause_size) if isinstance(clause_size, int) else clause_size
    lo, hi = min(lo, num_vars), min(hi, num_vars)
    if lo < 1 or hi < lo:
        raise InputError(f"bad clause size range {clause_size!r}")
    r = random.Random(seed)
    raw = []
    for _ in range(num_clauses):
        vs = r.sample(range(1, num_vars + 1), r.randint(lo, hi))
        lits = [v if r.random() < 0.5 else -v for v in vs]
        hard = r.random() < hard_fraction
        raw.append((hard, r.randint(1, max_weight), lits))
    top = sum(w for hard, w, _ in raw if not hard) + 1
    pairs = [(top if hard else w, lits) for hard, w, lits in raw]
    return Formula.build(pairs, hard_limit=top, num_vars=num_vars)


def velocity(score_delta: int | float, elapsed: float) -> float:
    """Score gained per second."""
    if elapsed <= 0:
        raise ValueError("velocity is undefined for a non-positive elapsed time")
    return score_delta / elapsed


# -- control group ----------------------------------------------------------


@dataclass(frozen=True)
class Trial:
    trial: int
    seed: int
    initial_score: int
    final_score: int
    best_cost: int
    best_score: int
    elapsed: float


@dataclass(frozen=True)
class TrialStats:
    trials: tuple[Trial, ...]

    @property
    def trial_count(self) -> int:
        return len(self.trials)

    @property
    def mean_elapsed(self) -> float:
        return fmean(t.elapsed for t in self.trials)

    @property
    def max_score(self) -> int:
        return max(t.best_score for t in self.trials)


def control_runs(f: Formula, p: SolverParams, trials: int = 30) -> TrialStats:
    """Independent seeded MaxWalkSat runs; trial ``k`` uses ``derive_seed(p.seed, k)``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    out = []
    total = f.total_weight
    for k in range(trials):
        seed = derive_seed(p.seed, k)
        pk = p.replace(seed=seed)
        st = init_state(f, pk)
        initial = total - st.bad
        rep = run(st, pk)
        out.append(Trial(k, seed, initial, total - rep.final_cost, rep.best_cost,
                         total - rep.best_cost, rep.elapsed))
    return TrialStats(tuple(out))


def baseline(f: Formula, p: SolverParams, trials: int = 30) -> tuple[float, int]:
    """(mean elapsed seconds, maximum best score) over ``trials`` control runs."""
    stats = control_runs(f, p, trials)
    return stats.mean_elapsed, stats.max_score


# -- velocity comparison ----------------------------------------------------


@dataclass(frozen=True)
class VelocityRow:
    problem: str
    strategy: str
    up_velocity: float
    down_velocity: float


@dataclass(frozen=True)
class DirectionSummary:
    wins: float
    losses: float
    ties: float


@dataclass(frozen=True)
class VelocitySummary:
    up: DirectionSummary
    down: DirectionSummary
    sequences: int
    raw: dict[str, list[list[EventReport]]] = field(default_factory=dict, repr=False)


def reference_targets(seq: DwcspSequence, p: SolverParams) -> list[int]:
    """Per-solve targets: one above the final cost of an untimed MaxWalkSat run.

    The reference run reports its final assignment, as MaxWalkSat does. A
    timed solve stops as soon as it matches that quality, so elapsed time
    measures how quickly each strategy gets there.
    """
    cache: dict[tuple[int, ...], int] = {}
    targets = []
    for k, f in enumerate(seq.formulas()):
        key = tuple(c.id for c in f.clauses)
        if key not in cache:
            cache[key] = solve(f, p.replace(seed=derive_seed(p.seed, 0x5EF, k))).final_cost
        targets.append(cache[key] + 1)
    return targets


def _mean_velocity(reports: Iterable[EventReport], kind: str) -> float:
    vs = [velocity(r.score_after - r.score_before, r.elapsed)
          for r in reports if r.kind == kind and r.elapsed > 0]
    return fmean(vs) if vs else 0.0


def _fractions(pairs: Sequence[tuple[float, float]]) -> DirectionSummary:
    n = len(pairs)
    wins = sum(w > c for w, c in pairs)
    ties = sum(w == c for w, c in pairs)
    return DirectionSummary(wins / n, (n - wins - ties) / n, ties / n)


def compare_strategies(
    seqs: Sequence[tuple[str, DwcspSequence]] | Sequence[DwcspSequence],
    p: SolverParams,
    seeds_per_sequence: int = 3,
    use_reference: bool = True,
) -> tuple[list[VelocityRow], VelocitySummary]:
    """Mean upward/downward velocity of both strategies on each sequence.

    Each sequence is replayed with ``seeds_per_sequence`` derived seeds. For
    every seed both strategies share the initial assignment and the per-solve
    targets. A sequence's velocity per direction is the mean over its events
    and seeds.
    """
    if not seqs:
        raise ValueError("need at least one sequence")
    labelled = [s if isinstance(s, tuple) else (f"seq{k}", s) for k, s in enumerate(seqs)]
    rows: list[VelocityRow] = []
    up_pairs, down_pairs = [], []
    raw: dict[str, list[list[EventReport]]] = {}
    for n, (label, seq) in enumerate(labelled):
        per = {WARM: [], COLD: []}
        for r in range(seeds_per_sequence):
            ps = p.replace(seed=derive_seed(p.seed, n, r))
            targets = reference_targets(seq, ps) if use_reference else None
            m0 = init_state(seq.initial, ps).assignment
            for strategy in (WARM, COLD):
                per[strategy].extend(replay(seq, strategy, ps, targets, m0))
        raw[label] = [per[WARM], per[COLD]]
        means = {}
        for strategy in (WARM, COLD):
            up = _mean_velocity(per[strategy], "add")
            down = _mean_velocity(per[strategy], "remove")
            means[strategy] = (up, down)
            rows.append(VelocityRow(label, strategy, up, down))
        up_pairs.append((means[WARM][0], means[COLD][0]))
        down_pairs.append((means[WARM][1], means[COLD][1]))
    summary = VelocitySummary(_fractions(up_pairs), _fractions(down_pairs), len(labelled), raw)
    return rows, summary


# -- anytime thresholds -----------------------------------------------------


@dataclass(frozen=True)
class ThresholdRow:
    problem: str
    fractions: tuple[float, ...]
    mean_best_scores: tuple[float, ...]
    deltas_pct: tuple[float, ...]
    samples: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def last_interval_largest(self) -> bool:
        return bool(self.deltas_pct) and self.deltas_pct[-1] == max(self.deltas_pct) \
            and self.deltas_pct.count(self.deltas_pct[-1]) == 1


def sample_run(
    f: Formula, p: SolverParams, baseline: float, fractions: Sequence[float] = FRACTIONS
) -> list[anytime.BestRecord]:
    """One anytime run, read at each fraction of ``baseline`` (1.0 means the finished run)."""
    h = anytime.start(f, p)
    h.wait()
    out = []
    for frac in fractions:
        out.append(h.snapshot() if frac >= 1.0 else h.best_at(frac * baseline))
    return out


def threshold_row(
    problem: str,
    samples: Sequence[Sequence[int]],
    max_score: int,
    fractions: Sequence[float] = FRACTIONS,
) -> ThresholdRow:
    """Aggregate raw per-trial best scores into means and interval deltas."""
    means = tuple(fmean(s[k] for s in samples) for k in range(len(fractions)))
    scale = 100.0 / max_score if max_score > 0 else 0.0
    deltas = tuple((means[k + 1] - means[k]) * scale for k in range(len(means) - 1))
    return ThresholdRow(problem, tuple(fractions), means, deltas,
                        tuple(tuple(s) for s in samples))


def threshold_sample(
    f: Formula,
    p: SolverParams,
    baseline: float,
    trials: int = 30,
    max_score: int | None = None,
    problem: str = "",
    fractions: Sequence[float] = FRACTIONS,
) -> ThresholdRow:
    """Mean best score of the anytime solver at fractions of the baseline time.

    Deltas are percentages of ``max_score`` (the control group's best score
    when given, else the best completed score among these trials).
    """
    if baseline <= 0:
        raise ValueError("baseline must be positive")
    samples = []
    for k in range(trials):
        recs = sample_run(f, p.replace(seed=derive_seed(p.seed, k)), baseline, fractions)
        samples.append([r.score for r in recs])
    if max_score is None:
        max_score = max(s[-1] for s in samples)
    return threshold_row(problem, samples, max_score, fractions)


# -- CSV --------------------------------------------------------------------


def _writer(path: str, header: Sequence[str]):
    fh = open(path, "w", newline="", encoding="utf-8")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    return fh, w


def write_runtimes(path: str, stats: dict[str, TrialStats]) -> None:
    fh, w = _writer(path, ("problem", "trial", "initial_score", "final_score", "elapsed_s"))
    with fh:
        for problem, s in stats.items():
            for t in s.trials:
                w.writerow((problem, t.trial, t.initial_score, t.final_score, f"{t.elapsed:.6f}"))


def write_velocities(path: str, rows: Iterable[VelocityRow]) -> None:
    fh, w = _writer(path, ("problem", "strategy", "up_velocity", "down_velocity"))
    with fh:
        for r in rows:
            w.writerow((r.problem, r.strategy, f"{r.up_velocity:.6f}", f"{r.down_velocity:.6f}"))


def write_thresholds(path: str, rows: Iterable[ThresholdRow]) -> None:
    fh, w = _writer(path, ("problem", "fraction", "mean_best_score", "interval_delta_pct"))
    with fh:
        for r in rows:
            for k, frac in enumerate(r.fractions):
                delta = "" if k == 0 else f"{r.deltas_pct[k - 1]:.6f}"
                w.writerow((r.problem, frac, f"{r.mean_best_scores[k]:.6f}", delta))


# -- full harness -------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    problems: int = 3
    trials: int = 30
    num_vars: int = 60
    num_clauses: int = 400
    batch_size: int = 100
    seeds_per_sequence: int = 3
    jobs: int = 1


def _bench_problem(args):
    label, f, p, cfg = args
    stats = control_runs(f, p, cfg.trials)
    rows, _ = compare_strategies([(label, generate_sequence(f, cfg.batch_size))], p,
                                 cfg.seeds_per_sequence)
    th = threshold_sample(f, p, stats.mean_elapsed, cfg.trials, stats.max_score, label)
    return label, stats, rows, th


def run_bench(
    out_dir: str,
    p: SolverParams,
    cfg: BenchConfig = BenchConfig(),
    problems: dict[str, Formula] | None = None,
) -> dict[str, str]:
    """Run all three procedures and write runtimes/velocities/thresholds CSVs."""
    if problems is None:
        problems = {
            f"rand_V{cfg.num_vars}_C{cfg.num_clauses}_{k}":
                random_instance(cfg.num_vars, cfg.num_clauses, seed=derive_seed(p.seed, 0xB, k))
            for k in range(cfg.problems)
        }
    tasks = [(label, f, p.replace(seed=derive_seed(p.seed, n)), cfg)
             for n, (label, f) in enumerate(problems.items())]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_bench_problem, tasks))
    else:
        results = [_bench_problem(t) for t in tasks]
    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, f"{name}.csv")
             for name in ("runtimes", "velocities", "thresholds")}
    write_runtimes(paths["runtimes"], {label: s for label, s, _, _ in results})
    write_velocities(paths["velocities"], [r for _, _, rows, _ in results for r in rows])
    write_thresholds(paths["thresholds"], [th for *_, th in results])
    return paths
