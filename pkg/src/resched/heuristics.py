"""EDF rule, greedy initial permutation and tabu search over permutations."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .core import BaselineSchedule, Instance, Permutation, SolveResult, Status, total_tardiness
from .fixed_perm import KernelContext, optimal_robust_schedule

RESTART_TRIES = 100


def _result(inst, perm, started, counters=None) -> SolveResult:
    res = optimal_robust_schedule(inst, perm)
    runtime = time.perf_counter() - started
    if not res.feasible:
        return SolveResult(Status.INFEASIBLE, runtime=runtime, counters=counters or {})
    return SolveResult(Status.FEASIBLE, res.schedule, total_tardiness(inst, res.schedule),
                       runtime, False, counters or {})


def edf_order(inst: Instance) -> Permutation:
    return tuple(sorted(range(inst.n), key=lambda i: (int(inst.due[i]), int(inst.release[i]), i)))


def edf_schedule(inst: Instance) -> SolveResult:
    started = time.perf_counter()
    return _result(inst, edf_order(inst), started)


def greedy_initial(inst: Instance) -> Optional[Permutation]:
    """Position by position, append the operation with the smallest tardiness bound.

    The bound is the candidate's own tardiness at its earliest robust start
    plus every other unassigned operation started at max(release, candidate
    completion), overlaps allowed.  Ties go to the earlier completion, and
    among equal completions to the later operation index.  Returns None when
    no unassigned operation has a robust start at some position.
    """
    ctx = KernelContext(inst)
    n = inst.n
    r, p, d = inst.release, inst.processing, inst.due
    perm = np.zeros(n, dtype=np.int64)
    bs, ls, _ = _kernels.empty_state(n)
    left = list(range(n))
    for pos in range(n):
        best = None
        best_key = None
        for i in left:
            perm[pos] = i
            s = ctx.start_at(pos, perm, bs, ls)
            if s > inst.max_start:
                continue
            done = s + int(p[i])
            bound = max(done - int(d[i]), 0)
            for k in left:
                if k != i:
                    bound += max(max(done, int(r[k])) + int(p[k]) - int(d[k]), 0)
            if best_key is None or bound < best_key[0] or (bound == best_key[0] and done <= best_key[1]):
                best, best_key = i, (bound, done)
        if best is None:
            return None
        perm[pos] = best
        ctx.start_at(pos, perm, bs, ls)
        left.remove(best)
    return tuple(int(i) for i in perm)


def greedy_schedule(inst: Instance) -> SolveResult:
    started = time.perf_counter()
    perm = greedy_initial(inst)
    if perm is None:
        return SolveResult(Status.INFEASIBLE, runtime=time.perf_counter() - started)
    return _result(inst, perm, started)


@dataclass(frozen=True)
class TabuParams:
    restarts: int = 5
    iterations: int = 200
    neighbourhood: int = 50
    tabu_len: int = 5
    stop_no_improve: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        for name in ("restarts", "iterations", "neighbourhood", "tabu_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.stop_no_improve is not None and self.stop_no_improve < 1:
            raise ValueError("stop_no_improve must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class TraceStep:
    restart: int
    iteration: int
    tabu_before: tuple[Permutation, ...]
    chosen: Optional[Permutation]
    objective: Optional[int]


class _State:
    """A feasible permutation with its per-position kernel state."""

    __slots__ = ("perm", "bs", "ls", "tard", "obj")

    def __init__(self, perm, bs, ls, tard):
        self.perm, self.bs, self.ls, self.tard = perm, bs, ls, tard
        self.obj = int(tard[-1])

    @property
    def key(self) -> Permutation:
        return tuple(self.perm.tolist())


def _evaluate(ctx, cur: Optional[_State], perm: np.ndarray, cutoff: int = -1):
    """Schedule ``perm``, reusing ``cur``'s state for the common prefix."""
    n = perm.shape[0]
    if cur is None:
        start = 0
        bs, ls, tard = _kernels.empty_state(n)
    else:
        diff = np.flatnonzero(cur.perm != perm)
        start = int(diff[0]) if diff.size else n
        bs, ls, tard = cur.bs.copy(), cur.ls.copy(), cur.tard.copy()
    code, _ = ctx.run(perm, start, bs, ls, tard, cutoff)
    if code != _kernels.FEASIBLE:
        return None
    return _State(perm, bs, ls, tard)


def _neighbours(rng: np.random.Generator, perm: np.ndarray, count: int) -> list[np.ndarray]:
    n = perm.shape[0]
    out = []
    for _ in range(count):
        swap = rng.random() < 0.5
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        nb = perm.copy()
        if swap:
            nb[a], nb[b] = nb[b], nb[a]
        else:
            moved = nb[a]
            nb = np.insert(np.delete(nb, a), b, moved)
        out.append(nb)
    return out


def _random_start(ctx, rng, n):
    for _ in range(RESTART_TRIES):
        st = _evaluate(ctx, None, rng.permutation(n).astype(np.int64))
        if st is not None:
            return st
    return None


def tabu_search(inst: Instance, params: TabuParams = TabuParams(), trace: Optional[list] = None) -> SolveResult:
    """Tabu search over permutations; the first run starts from the greedy order.

    Later runs start from random feasible permutations.  Every run keeps a
    FIFO list of the last ``tabu_len`` visited permutations.  Each iteration
    moves to the best non-tabu neighbour (objective, then lexicographic
    order), even if it is worse.  A run ends after ``iterations`` iterations,
    or, when ``stop_no_improve`` is set, after that many iterations without
    improving the run's best.  When ``trace`` is a list, one ``TraceStep`` is
    appended per iteration.
    """
    started = time.perf_counter()
    n = inst.n
    ctx = KernelContext(inst)
    rng = np.random.Generator(np.random.PCG64(params.seed))
    best: Optional[_State] = None
    iterations = evaluations = runs = 0

    for restart in range(params.restarts):
        cur = None
        if restart == 0:
            for first in (greedy_initial(inst), edf_order(inst)):
                if first is not None:
                    cur = _evaluate(ctx, None, np.asarray(first, dtype=np.int64))
                    if cur is not None:
                        break
        if cur is None:
            cur = _random_start(ctx, rng, n)
        if cur is None:
            continue
        runs += 1
        if best is None or (cur.obj, cur.key) < (best.obj, best.key):
            best = cur
        if n < 2:
            continue
        run_best = cur.obj
        tabu: deque[Permutation] = deque([cur.key], maxlen=params.tabu_len)
        stale = 0
        it = 0
        while True:
            if params.stop_no_improve is None:
                if it >= params.iterations:
                    break
            elif stale >= params.stop_no_improve:
                break
            tabu_before = tuple(tabu)
            pick: Optional[_State] = None
            seen = set()
            for nb in _neighbours(rng, cur.perm, params.neighbourhood):
                key = tuple(nb.tolist())
                if key in seen or key in tabu:
                    continue
                seen.add(key)
                evaluations += 1
                st = _evaluate(ctx, cur, nb, -1 if pick is None else pick.obj)
                if st is not None and (pick is None or (st.obj, key) < (pick.obj, pick.key)):
                    pick = st
            if pick is not None:
                cur = pick
                tabu.append(cur.key)
                if cur.obj < run_best:
                    run_best = cur.obj
                    stale = 0
                else:
                    stale += 1
                if (cur.obj, cur.key) < (best.obj, best.key):
                    best = cur
            else:
                stale += 1
            if trace is not None:
                trace.append(TraceStep(restart, it, tabu_before,
                                       pick.key if pick is not None else None,
                                       pick.obj if pick is not None else None))
            it += 1
            iterations += 1

    runtime = time.perf_counter() - started
    counters = {"runs": runs, "iterations": iterations, "evaluations": evaluations}
    if best is None:
        return SolveResult(Status.INFEASIBLE, runtime=runtime, counters=counters)
    sched = BaselineSchedule.from_positions(best.key, best.bs.tolist())
    return SolveResult(Status.FEASIBLE, sched, best.obj, runtime, False, counters)
