"""Benders loop: master candidates checked for robustness, cuts on failure."""

from __future__ import annotations

import time
from collections import Counter
from typing import Callable, Optional

from ..core import BaselineSchedule, Instance, SolveResult, Status, total_tardiness
from ..fixed_perm import optimal_robust_schedule
from ..heuristics import edf_order, greedy_initial
from ..verification import is_robust
from .adapters import INFEASIBLE, OPTIMAL, SolverAdapter, get_adapter
from .cuts import Cut, cut_columns, generate_cut
from .master import build_master

CutHook = Callable[[BaselineSchedule, Cut], None]


def _best_of_orders(inst, orders):
    best = None
    for perm in orders:
        if perm is None:
            continue
        res = optimal_robust_schedule(inst, perm)
        if res.feasible:
            obj = total_tardiness(inst, res.schedule)
            if best is None or obj < best[0]:
                best = (obj, res.schedule)
    return best


def lbbd_solve(
    inst: Instance,
    adapter: Optional[SolverAdapter] = None,
    time_limit: Optional[float] = None,
    on_cut: Optional[CutHook] = None,
    use_upper_bound: bool = True,
) -> SolveResult:
    """Solve exactly through ``adapter`` (default: ``get_adapter()``).

    ``on_cut`` sees every non-robust candidate together with its cut.

    With ``use_upper_bound`` the best fixed-permutation schedule of the EDF
    and greedy orders seeds an incumbent, and master columns whose own
    tardiness exceeds it are dropped.  Every rejected candidate's order is
    scheduled the same way to improve the incumbent, and the loop stops once
    the master objective (a lower bound) reaches it.
    """
    started = time.perf_counter()
    if adapter is None:
        adapter = get_adapter()
    incumbent = _best_of_orders(inst, (edf_order(inst), greedy_initial(inst))) if use_upper_bound else None
    model = build_master(inst, incumbent[0] if incumbent else None)
    for c in model.objective:
        adapter.add_binary_var(c)
    for row in model.constraints:
        adapter.add_linear_constraint(row.indices, row.coeffs, row.sense, row.rhs)
    adapter.set_time_limit(time_limit)

    seen: set[tuple[int, ...]] = set()
    kinds: Counter = Counter()
    closed = False

    def callback(values):
        nonlocal incumbent, closed
        cand = model.schedule_from(values)
        if cand.starts in seen:
            raise RuntimeError(f"master returned an already cut candidate {cand.starts}")
        seen.add(cand.starts)
        if is_robust(inst, cand).robust:
            return []
        if use_upper_bound:
            found = _best_of_orders(inst, (cand.perm,))
            if found is not None and (incumbent is None or found[0] < incumbent[0]):
                incumbent = found
            if incumbent is not None and total_tardiness(inst, cand) >= incumbent[0]:
                closed = True
                return []
        cut = generate_cut(inst, cand, check=False)
        kinds[cut.kind] += 1
        if on_cut is not None:
            on_cut(cand, cut)
        cols = cut_columns(cut, model.column_index)
        return [(cols, [1] * len(cols), "<=", cut.bound)]

    res = adapter.solve_with_integer_callback(callback)
    runtime = time.perf_counter() - started
    counters = {
        "adapter": adapter.name,
        "candidates": res.candidates,
        "cuts": sum(kinds.values()),
        "cuts_by_kind": dict(sorted(kinds.items())),
        "closed_by_incumbent": closed,
    }
    if res.status == OPTIMAL and not closed:
        sched = model.schedule_from(res.values)
        return SolveResult(Status.FEASIBLE, sched, total_tardiness(inst, sched), runtime, True, counters)
    if res.status in (OPTIMAL, INFEASIBLE) and incumbent is not None:
        # the master can only run dry below the incumbent if nothing beats it
        return SolveResult(Status.FEASIBLE, incumbent[1], incumbent[0], runtime, True, counters)
    if res.status == INFEASIBLE:
        return SolveResult(Status.INFEASIBLE, runtime=runtime, proven_optimal=True, counters=counters)
    if incumbent is not None:
        return SolveResult(Status.TIMED_OUT, incumbent[1], incumbent[0], runtime, False, counters)
    return SolveResult(Status.TIMED_OUT, runtime=runtime, counters=counters)
