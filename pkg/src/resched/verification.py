"""Robustness checks for arbitrary baseline schedules and exhaustive oracles."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Optional, Union

from .core import (
    BaselineSchedule,
    Instance,
    SolveResult,
    Status,
    interval_intersection_length,
    latest_start_schedule,
    total_tardiness,
)
from .fixed_perm import (
    DEFAULT_SCENARIO_BUDGET,
    BudgetExceeded,
    first_violation,
    optimal_robust_schedule,
)

DEFAULT_PERMUTATION_CAP = 8


@dataclass(frozen=True)
class Robust:
    robust = True


@dataclass(frozen=True)
class Violated:
    """A limit violation.

    ``scenario`` is a full deviation vector (indexed by operation) that
    reproduces the violation in ``interval``.  ``position``/``shift_time`` are
    set when the witness comes from a right-shift schedule.
    """

    interval: int
    scenario: tuple[int, ...]
    position: Optional[int] = None
    shift_time: Optional[int] = None
    robust = False


Verdict = Union[Robust, Violated]


def _right_shift_prefix(perm, lst, p, pos, t):
    out = [0] * (pos + 1)
    out[pos] = t
    for k in range(pos - 1, -1, -1):
        out[k] = min(lst[k], out[k + 1] - int(p[perm[k]]))
    return out


def _scenario_for_prefix(inst, base, shifted):
    # constructive deviations that realise a right-shift prefix
    p = inst.processing
    dev = [0] * inst.n
    prev_end = None
    for op, t in zip(base.perm, shifted):
        s = base.starts[op]
        dev[op] = t - (s if prev_end is None else max(s, prev_end))
        prev_end = t + int(p[op])
    return tuple(dev)


def is_robust(inst: Instance, base: BaselineSchedule) -> Verdict:
    """Check every right-shift prefix instead of every scenario.

    A violated interval always has a last operation intersecting it, and the
    right-shift schedule pinned at that operation's realised start consumes at
    least as much energy there, so scanning all pinned positions and shift
    times is complete.  The lexicographically smallest (position, time,
    interval) witness is reported.
    """
    base.validate(inst)
    perm = base.perm
    lst = latest_start_schedule(inst, base).starts_by_position
    p, pw, lim = inst.processing, inst.power_scaled, inst.limit_scaled
    D = inst.interval_length
    for pos, op in enumerate(perm):
        pop = int(p[op])
        for t in range(base.starts[op], lst[pos] + 1):
            shifted = _right_shift_prefix(perm, lst, p, pos, t)
            for j in range(t // D, (t + pop - 1) // D + 1):
                lo, hi = j * D, j * D + D
                energy = 0
                for k in range(pos, -1, -1):
                    o = perm[k]
                    st = shifted[k]
                    if st + int(p[o]) <= lo:
                        break
                    energy += interval_intersection_length(lo, hi, st, st + int(p[o])) * int(pw[o])
                if energy > lim[j]:
                    return Violated(
                        interval=j,
                        scenario=_scenario_for_prefix(inst, base, shifted),
                        position=pos,
                        shift_time=t,
                    )
    return Robust()


def brute_force_is_robust(
    inst: Instance, base: BaselineSchedule, budget: int = DEFAULT_SCENARIO_BUDGET
) -> Verdict:
    """Enumerate all (dmax+1)^n scenarios."""
    base.validate(inst)
    hit = first_violation(inst, base.perm, base.by_position(), budget)
    if hit is None:
        return Robust()
    by_pos, j = hit
    scenario = [0] * inst.n
    for op, d in zip(base.perm, by_pos):
        scenario[op] = d
    return Violated(interval=j, scenario=tuple(scenario))


def brute_force_optimum(inst: Instance, cap: int = DEFAULT_PERMUTATION_CAP) -> SolveResult:
    """Best fixed-permutation schedule over all n! permutations.

    Ties go to the lexicographically smallest permutation.
    """
    if inst.n > cap:
        raise BudgetExceeded(f"n={inst.n} exceeds the permutation cap {cap}")
    started = time.perf_counter()
    best: Optional[BaselineSchedule] = None
    best_obj = math.inf
    feasible = 0
    for perm in itertools.permutations(range(inst.n)):
        res = optimal_robust_schedule(inst, perm)
        if not res.feasible:
            continue
        feasible += 1
        obj = total_tardiness(inst, res.schedule)
        if obj < best_obj:
            best, best_obj = res.schedule, obj
    counters = {"permutations": math.factorial(inst.n), "feasible_permutations": feasible}
    runtime = time.perf_counter() - started
    if best is None:
        return SolveResult(Status.INFEASIBLE, runtime=runtime, proven_optimal=True, counters=counters)
    return SolveResult(Status.FEASIBLE, best, int(best_obj), runtime, True, counters)
