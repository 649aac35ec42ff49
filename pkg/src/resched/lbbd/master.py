"""Time-indexed master model.

Binary ``x[i, t]`` means operation ``i`` starts at ``t`` for
``t in [r_i, s_max]``.  Given an upper bound on the optimal tardiness, starts
whose own tardiness exceeds it are left out.  The per-time energies ``e_t`` are kept as linear
expressions over the binaries and substituted into the limit rows, so the
model handed to a solver is pure 0/1.  All energy coefficients are the
instance's integer-scaled powers and limits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..core import BaselineSchedule, Instance, InvalidInstance

START_ONCE = "start_once"
NO_OVERLAP = "no_overlap"
INTERVAL_LIMIT = "interval_limit"
SINGLE_DEVIATION = "single_deviation"


@dataclass(frozen=True)
class LinearConstraint:
    indices: tuple[int, ...]
    coeffs: tuple[int, ...]
    sense: str  # "<=", "==" or ">="
    rhs: int
    family: str = ""

    def activity(self, values: Sequence[float]) -> float:
        return sum(c * values[k] for k, c in zip(self.indices, self.coeffs))

    def satisfied_by(self, values: Sequence[float], tol: float = 1e-9) -> bool:
        a = self.activity(values)
        if self.sense == "<=":
            return a <= self.rhs + tol
        if self.sense == ">=":
            return a >= self.rhs - tol
        return abs(a - self.rhs) <= tol


@dataclass
class MasterModel:
    inst: Instance
    columns: list[tuple[int, int]] = field(default_factory=list)
    column_index: dict[tuple[int, int], int] = field(default_factory=dict)
    objective: list[int] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    energy: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=dict)

    @property
    def num_binary(self) -> int:
        return len(self.columns)

    @property
    def num_energy(self) -> int:
        return len(self.energy)

    @property
    def num_variables(self) -> int:
        return self.num_binary + self.num_energy

    def family(self, name: str) -> list[LinearConstraint]:
        return [c for c in self.constraints if c.family == name]

    def values_of(self, base: BaselineSchedule) -> list[int]:
        """0/1 column vector of a baseline schedule (KeyError outside the domain)."""
        x = [0] * self.num_binary
        for i, t in enumerate(base.starts):
            x[self.column_index[(i, t)]] = 1
        return x

    def violated(self, base: BaselineSchedule) -> list[LinearConstraint]:
        x = self.values_of(base)
        return [c for c in self.constraints if not c.satisfied_by(x)]

    def schedule_from(self, values: Sequence[float]) -> BaselineSchedule:
        """Read ``x >= 0.5`` as "starts at t"; exactly one start per operation."""
        starts: list[list[int]] = [[] for _ in range(self.inst.n)]
        for k, v in enumerate(values):
            if v >= 0.5:
                i, t = self.columns[k]
                starts[i].append(t)
        if any(len(s) != 1 for s in starts):
            raise ValueError("master solution does not start every operation exactly once")
        return BaselineSchedule.from_starts([s[0] for s in starts])


def _window_row(model: MasterModel, lo: int, hi: int, rhs: int, family: str) -> LinearConstraint:
    # sum of e_t over [lo, hi) with e_t expanded into start binaries
    inst = model.inst
    p, pw = inst.processing, inst.power_scaled
    idx, coef = [], []
    for i in range(inst.n):
        if pw[i] == 0:
            continue
        pi = int(p[i])
        for t in range(max(int(inst.release[i]), lo - pi + 1), min(hi - 1, inst.max_start) + 1):
            overlap = min(hi, t + pi) - max(lo, t)
            k = model.column_index.get((i, t))
            if overlap > 0 and k is not None:
                idx.append(k)
                coef.append(overlap * int(pw[i]))
    return LinearConstraint(tuple(idx), tuple(coef), "<=", rhs, family)


def build_master(inst: Instance, upper_bound: Optional[int] = None) -> MasterModel:
    smax = inst.max_start
    r, p, d, pw = inst.release, inst.processing, inst.due, inst.power_scaled
    if any(smax < int(ri) for ri in r):
        raise InvalidInstance("s_max is below some release time")
    m = MasterModel(inst)
    last = [smax] * inst.n
    if upper_bound is not None:
        last = [max(int(r[i]), min(smax, int(d[i]) - int(p[i]) + upper_bound)) for i in range(inst.n)]
    for i in range(inst.n):
        for t in range(int(r[i]), last[i] + 1):
            m.column_index[(i, t)] = len(m.columns)
            m.columns.append((i, t))
            m.objective.append(max(0, t + int(p[i]) - int(d[i])))

    for i in range(inst.n):
        cols = tuple(m.column_index[(i, t)] for t in range(int(r[i]), last[i] + 1))
        m.constraints.append(LinearConstraint(cols, (1,) * len(cols), "==", 1, START_ONCE))

    H = inst.horizon
    for t in range(int(r.min()), H):
        idx, en = [], []
        for i in range(inst.n):
            for t2 in range(max(int(r[i]), t - int(p[i]) + 1), min(t, last[i]) + 1):
                idx.append(m.column_index[(i, t2)])
                en.append(int(pw[i]))
        m.energy[t] = (tuple(idx), tuple(en))
        if idx:
            m.constraints.append(LinearConstraint(tuple(idx), (1,) * len(idx), "<=", 1, NO_OVERLAP))

    D = inst.interval_length
    lim = inst.limit_scaled
    for j in range(inst.num_intervals):
        m.constraints.append(_window_row(m, j * D, j * D + D, int(lim[j]), INTERVAL_LIMIT))
    for delta in range(1, inst.max_deviation + 1):
        for j in range(inst.num_intervals):
            lo = max(0, j * D - delta)
            hi = j * D + D - delta
            m.constraints.append(_window_row(m, lo, hi, int(lim[j]), SINGLE_DEVIATION))
    return m

