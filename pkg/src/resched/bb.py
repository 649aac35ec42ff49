"""Depth-first branch and bound over partial permutations."""

from __future__ import annotations

import heapq
import math
import time
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .core import BaselineSchedule, Instance, SolveResult, Status, total_tardiness
from .fixed_perm import KernelContext


def chu_lower_bound(inst: Instance, remaining: Iterable[int], available_from: int) -> int:
    """Tardiness bound from the preemptive SRPT schedule of ``remaining``.

    Releases are lifted to ``available_from``; the k-th SRPT completion is
    paired with the k-th smallest due date.  Equal remaining times go to the
    smaller operation index.
    """
    ops = sorted(remaining, key=lambda i: (max(int(inst.release[i]), available_from), i))
    if not ops:
        return 0
    rel = [max(int(inst.release[i]), available_from) for i in ops]
    heap: list[tuple[int, int]] = []
    completions = []
    k = 0
    t = rel[0]
    while k < len(ops) or heap:
        while k < len(ops) and rel[k] <= t:
            heapq.heappush(heap, (int(inst.processing[ops[k]]), ops[k]))
            k += 1
        if not heap:
            t = rel[k]
            continue
        rem, i = heapq.heappop(heap)
        nxt = rel[k] if k < len(ops) else math.inf
        if t + rem <= nxt:
            t += rem
            completions.append(t)
        else:
            heapq.heappush(heap, (rem - (nxt - t), i))
            t = nxt
    dues = sorted(int(inst.due[i]) for i in ops)
    return sum(max(c - d, 0) for c, d in zip(completions, dues))


class _Search:
    def __init__(self, inst, incumbent, deadline, node_limit, use_lower_bound):
        self.inst = inst
        self.ctx = KernelContext(inst)
        n = inst.n
        self.perm = np.zeros(n, dtype=np.int64)
        self.bs, self.ls, self.tard = _kernels.empty_state(n)
        self.order = sorted(range(n), key=lambda i: (int(inst.due[i]), i))
        self.best_obj = math.inf
        self.best: Optional[BaselineSchedule] = None
        if incumbent is not None:
            self.best = incumbent
            self.best_obj = total_tardiness(inst, incumbent)
        self.incumbents = [self.best_obj] if incumbent is not None else []
        self.deadline = deadline
        self.node_limit = node_limit
        self.use_lb = use_lower_bound
        self.nodes = 0
        self.pruned_infeasible = 0
        self.pruned_bound = 0
        self.aborted = False

    def _out_of_budget(self) -> bool:
        if self.node_limit is not None and self.nodes >= self.node_limit:
            return True
        return self.deadline is not None and time.perf_counter() > self.deadline

    def dfs(self, pos: int, used: list[bool]) -> None:
        inst, ctx = self.inst, self.ctx
        n = inst.n
        for i in self.order:
            if used[i]:
                continue
            if self._out_of_budget():
                self.aborted = True
                return
            self.nodes += 1
            self.perm[pos] = i
            s = ctx.start_at(pos, self.perm, self.bs, self.ls)
            if s > inst.max_start:
                self.pruned_infeasible += 1
                continue
            late = s + int(inst.processing[i]) - int(inst.due[i])
            acc = (int(self.tard[pos - 1]) if pos else 0) + max(late, 0)
            self.tard[pos] = acc
            if pos == n - 1:
                if acc < self.best_obj:
                    self.best_obj = acc
                    self.best = BaselineSchedule.from_positions(self.perm.tolist(), self.bs.tolist())
                    self.incumbents.append(acc)
                continue
            if acc >= self.best_obj:
                self.pruned_bound += 1
                continue
            if self.use_lb:
                used[i] = True
                rest = [k for k in range(n) if not used[k]]
                lb = chu_lower_bound(inst, rest, s + int(inst.processing[i]))
                used[i] = False
                if acc + lb >= self.best_obj:
                    self.pruned_bound += 1
                    continue
            used[i] = True
            self.dfs(pos + 1, used)
            used[i] = False
            if self.aborted:
                return


def bb_solve(
    inst: Instance,
    initial_upper_bound: Optional[SolveResult] = None,
    time_limit: Optional[float] = None,
    node_limit: Optional[int] = None,
    use_lower_bound: bool = True,
) -> SolveResult:
    """Exact search; children are tried in ascending (due date, index) order.

    A child is pruned when its prefix has no robust start or when its prefix
    tardiness plus the SRPT bound of the unscheduled operations reaches the
    incumbent.  ``initial_upper_bound`` (e.g. a tabu result) seeds the
    incumbent.  ``counters["incumbents"]`` lists the objective after every
    improvement.
    """
    started = time.perf_counter()
    deadline = started + time_limit if time_limit is not None else None
    seed = initial_upper_bound.schedule if initial_upper_bound is not None else None
    search = _Search(inst, seed, deadline, node_limit, use_lower_bound)
    search.dfs(0, [False] * inst.n)
    runtime = time.perf_counter() - started
    counters = {
        "nodes": search.nodes,
        "pruned_infeasible": search.pruned_infeasible,
        "pruned_bound": search.pruned_bound,
        "incumbents": list(search.incumbents),
    }
    if search.aborted:
        if search.best is None:
            return SolveResult(Status.TIMED_OUT, runtime=runtime, counters=counters)
        return SolveResult(Status.TIMED_OUT, search.best, int(search.best_obj), runtime, False, counters)
    if search.best is None:
        return SolveResult(Status.INFEASIBLE, runtime=runtime, proven_optimal=True, counters=counters)
    return SolveResult(Status.FEASIBLE, search.best, int(search.best_obj), runtime, True, counters)
