"""No-good cuts for non-robust master candidates.

A cut assigns every operation a cutting interval and states that at most
``n - 1`` operations start inside their interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import BaselineSchedule, Instance
from ..fixed_perm import optimal_robust_schedule
from ..verification import is_robust

ORDER = "order"
PUSH_RIGHT = "push_right"
PUSH_LEFT = "push_left"


class ContractViolation(RuntimeError):
    """A cut was requested for a candidate that is actually robust."""


@dataclass(frozen=True)
class Cut:
    """Inclusive cutting interval ``(lo, hi)`` per operation; empty when lo > hi."""

    intervals: tuple[tuple[int, int], ...]
    bound: int
    kind: str
    position: Optional[int] = None

    def members(self, starts) -> int:
        return sum(lo <= s <= hi for s, (lo, hi) in zip(starts, self.intervals))

    def satisfied_by(self, base: BaselineSchedule) -> bool:
        return self.members(base.starts) <= self.bound

    def violated_by(self, base: BaselineSchedule) -> bool:
        return not self.satisfied_by(base)


def _order_rows(inst, perm, sp, upto):
    # rows that keep positions 0..upto-1 in the candidate's order
    p, smax = inst.processing, inst.max_start
    rows = {}
    for k in range(upto):
        nxt = perm[k + 1]
        rows[perm[k]] = (sp[k], min(sp[k + 1] + int(p[nxt]) - 1, smax))
    return rows


def generate_cut(inst: Instance, candidate: BaselineSchedule, check: bool = True) -> Cut:
    """Cut excluding ``candidate`` but not the optimal schedule of its order."""
    if check and is_robust(inst, candidate).robust:
        raise ContractViolation("candidate schedule is robust")
    n, p, smax = inst.n, inst.processing, inst.max_start
    perm = candidate.perm
    sp = candidate.by_position()
    res = optimal_robust_schedule(inst, perm)

    if not res.feasible:
        rows = _order_rows(inst, perm, sp, n - 1)
        rows[perm[-1]] = (sp[-1], smax)
        return _finish(inst, rows, ORDER, None)

    star = res.schedule.by_position()
    pbar = next((k for k in range(n) if sp[k] != star[k]), None)
    if pbar is None:
        raise ContractViolation("candidate equals the optimal schedule of its permutation")
    rows = _order_rows(inst, perm, sp, pbar)
    cur = perm[pbar]
    if sp[pbar] < star[pbar]:
        if pbar == n - 1:
            rows[cur] = (sp[pbar], star[pbar] - 1)
        else:
            nxt = perm[pbar + 1]
            reach = sp[pbar + 1] + int(p[nxt])
            rows[cur] = (sp[pbar], min(star[pbar], reach) - 1)
            for k in range(pbar + 1, n):
                rows[perm[k]] = (min(star[pbar], reach - int(p[perm[k]])), smax)
        kind = PUSH_RIGHT
    else:
        rows[cur] = (star[pbar] + 1, sp[pbar])
        for k in range(pbar + 1, n):
            rows[perm[k]] = (sp[pbar] - int(p[perm[k]]) + 1, smax)
        kind = PUSH_LEFT
    return _finish(inst, rows, kind, pbar)


def _finish(inst, rows, kind, pbar) -> Cut:
    r, smax = inst.release, inst.max_start
    intervals = []
    for i in range(inst.n):
        lo, hi = rows[i]
        intervals.append((max(lo, int(r[i])), min(hi, smax)))
    return Cut(tuple(intervals), inst.n - 1, kind, pbar)


def cut_columns(cut: Cut, column_index) -> list[int]:
    """Master columns whose start falls inside the cut's intervals."""
    cols = []
    for i, (lo, hi) in enumerate(cut.intervals):
        for t in range(lo, hi + 1):
            k = column_index.get((i, t))
            if k is not None:
                cols.append(k)
    return cols
