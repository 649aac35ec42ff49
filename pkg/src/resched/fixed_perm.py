"""Optimal robust baseline schedule for a fixed permutation.

``optimal_robust_schedule`` places every operation at its earliest robust
start, position by position; ``earliest_robust_start`` is the fast per-position
routine and ``earliest_robust_start_naive`` the scenario-enumerating reference
it is tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .core import (
    BaselineSchedule,
    Instance,
    Permutation,
    Status,
    total_tardiness,
    validate_permutation,
)

DEFAULT_SCENARIO_BUDGET = 2**20
_CHUNK = 1 << 14


class BudgetExceeded(RuntimeError):
    """An exhaustive oracle would exceed its configured enumeration budget."""


@dataclass(frozen=True)
class FixedPermResult:
    status: Status
    schedule: Optional[BaselineSchedule] = None
    failed_position: Optional[int] = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


class KernelContext:
    """Instance arrays bundled in the order the kernels expect."""

    __slots__ = ("inst", "r", "p", "d", "pw", "lim", "D", "M", "dmax", "smax", "n")

    def __init__(self, inst: Instance):
        self.inst = inst
        self.r = inst.release
        self.p = inst.processing
        self.d = inst.due
        self.pw = inst.power_scaled
        self.lim = inst.limit_scaled
        self.D = inst.interval_length
        self.M = inst.num_intervals
        self.dmax = inst.max_deviation
        self.smax = inst.max_start
        self.n = inst.n

    def start_at(self, pos, perm, bs, ls) -> int:
        return int(_kernels.earliest_robust_start(
            pos, perm, bs, ls, self.r, self.p, self.pw, self.lim, self.D, self.M, self.dmax))

    def run(self, perm, start_pos, bs, ls, tard, cutoff=-1):
        code, pos = _kernels.schedule_from(
            perm, start_pos, bs, ls, tard, self.r, self.p, self.d, self.pw, self.lim,
            self.D, self.M, self.dmax, self.smax, cutoff)
        return int(code), int(pos)


def optimal_robust_schedule(inst: Instance, perm: Sequence[int]) -> FixedPermResult:
    perm = validate_permutation(perm, inst.n)
    ctx = KernelContext(inst)
    arr = np.asarray(perm, dtype=np.int64)
    bs, ls, tard = _kernels.empty_state(inst.n)
    code, pos = ctx.run(arr, 0, bs, ls, tard)
    if code == _kernels.INFEASIBLE:
        return FixedPermResult(Status.INFEASIBLE, failed_position=pos)
    return FixedPermResult(Status.FEASIBLE, BaselineSchedule.from_positions(perm, bs.tolist()))


def earliest_robust_start(
    inst: Instance,
    perm: Sequence[int],
    pos: int,
    starts: Sequence[int],
    lst: Sequence[int],
) -> Optional[tuple[int, int]]:
    """Earliest robust start of ``perm[pos]`` given the fixed prefix.

    ``starts`` and ``lst`` hold baseline and latest starts of positions
    ``0..pos-1``.  Returns ``(start, latest_start)`` or None when no robust
    start up to s_max exists.
    """
    n = len(perm)
    arr = np.asarray(perm, dtype=np.int64)
    bs = np.zeros(n, dtype=np.int64)
    ls = np.zeros(n, dtype=np.int64)
    bs[:pos] = starts[:pos]
    ls[:pos] = lst[:pos]
    s = KernelContext(inst).start_at(pos, arr, bs, ls)
    if s > inst.max_start:
        return None
    return s, int(ls[pos])


def first_violation(
    inst: Instance, ops: Sequence[int], base: Sequence[int], budget: int = DEFAULT_SCENARIO_BUDGET
) -> Optional[tuple[tuple[int, ...], int]]:
    """Enumerate every scenario of the operations ``ops`` run in that order.

    ``base`` holds their baseline starts.  Returns the first violating
    ``(deviations by position, interval)`` in lexicographic scenario order,
    or None when every scenario respects every limit.
    """
    k = len(ops)
    dmax = inst.max_deviation
    if (dmax + 1) ** k > budget:
        raise BudgetExceeded(f"{(dmax + 1) ** k} scenarios exceed the budget of {budget}")
    p = inst.processing[list(ops)]
    pw = inst.power_scaled[list(ops)]
    lim = inst.limit_scaled
    D = inst.interval_length
    lo = np.arange(inst.num_intervals, dtype=np.int64) * D
    hi = lo + D
    base = np.asarray(base, dtype=np.int64)
    devs_iter = itertools.product(range(dmax + 1), repeat=k)
    while True:
        chunk = list(itertools.islice(devs_iter, _CHUNK))
        if not chunk:
            return None
        dev = np.asarray(chunk, dtype=np.int64)
        real = np.empty_like(dev)
        real[:, 0] = base[0] + dev[:, 0]
        for m in range(1, k):
            real[:, m] = np.maximum(base[m], real[:, m - 1] + p[m - 1]) + dev[:, m]
        a = np.maximum(real[:, :, None], lo[None, None, :])
        b = np.minimum(real[:, :, None] + p[None, :, None], hi[None, None, :])
        energy = (np.clip(b - a, 0, None) * pw[None, :, None]).sum(axis=1)
        over = energy > lim[None, :]
        rows = np.flatnonzero(over.any(axis=1))
        if rows.size:
            row = int(rows[0])
            return chunk[row], int(np.flatnonzero(over[row])[0])


def earliest_robust_start_naive(
    inst: Instance,
    perm: Sequence[int],
    pos: int,
    starts: Sequence[int],
    budget: int = DEFAULT_SCENARIO_BUDGET,
) -> Optional[int]:
    """Reference version: try every start and enumerate every scenario."""
    ops = list(perm[: pos + 1])
    cur = ops[-1]
    s = int(inst.release[cur])
    if pos > 0:
        prev = ops[-2]
        s = max(s, starts[pos - 1] + int(inst.processing[prev]))
    prefix = list(starts[:pos])
    while s <= inst.max_start:
        if first_violation(inst, ops, prefix + [s], budget) is None:
            return s
        s += 1
    return None


def schedule_naive(inst: Instance, perm: Sequence[int], budget: int = DEFAULT_SCENARIO_BUDGET) -> FixedPermResult:
    """Fixed-permutation schedule built from the naive per-position routine."""
    perm = validate_permutation(perm, inst.n)
    starts: list[int] = []
    for pos in range(inst.n):
        s = earliest_robust_start_naive(inst, perm, pos, starts, budget)
        if s is None:
            return FixedPermResult(Status.INFEASIBLE, failed_position=pos)
        starts.append(s)
    return FixedPermResult(Status.FEASIBLE, BaselineSchedule.from_positions(perm, starts))


def objective_of(inst: Instance, perm: Permutation) -> Optional[int]:
    res = optimal_robust_schedule(inst, perm)
    return total_tardiness(inst, res.schedule) if res.feasible else None
