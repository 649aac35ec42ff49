"""Problem data model and schedule calculus.

Indexing conventions used throughout the package:

* operations are addressed by their 0-based index into ``Instance.operations``
  (``Operation.id`` is the 1-based label used in files and reports);
* positions in a permutation are 0-based;
* metering interval ``j`` is 0-based and covers ``[j*D, (j+1)*D)``.

Powers and energy limits are exact rationals.  Internally every instance keeps
an integer-scaled copy (``power_scaled``, ``limit_scaled``) so that limit checks
never touch floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

Permutation = tuple[int, ...]
Number = Union[int, Fraction, str, float]


class InvalidInstance(ValueError):
    """Instance data violates a structural invariant."""


class TriviallyInfeasible(InvalidInstance):
    """Some operation has no admissible start time at all (s_max < release)."""


class InvalidSchedule(ValueError):
    pass


def as_fraction(value: Number) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # Decimal string keeps 0.1 as 1/10 instead of its binary expansion.
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Operation:
    id: int
    release: int
    processing: int
    due: int
    power: Fraction

    def __post_init__(self):
        object.__setattr__(self, "power", as_fraction(self.power))
        if self.processing < 1:
            raise InvalidInstance(f"operation {self.id}: processing time must be >= 1")
        if self.release < 0 or self.due < 0:
            raise InvalidInstance(f"operation {self.id}: release and due must be >= 0")
        if self.power < 0:
            raise InvalidInstance(f"operation {self.id}: power must be >= 0")


@dataclass(frozen=True)
class Instance:
    operations: tuple[Operation, ...]
    interval_length: int
    energy_limits: tuple[Fraction, ...]
    max_deviation: int
    scale: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(self.operations)
        limits = tuple(as_fraction(e) for e in self.energy_limits)
        object.__setattr__(self, "operations", ops)
        object.__setattr__(self, "energy_limits", limits)
        if not ops:
            raise InvalidInstance("instance needs at least one operation")
        if [op.id for op in ops] != list(range(1, len(ops) + 1)):
            raise InvalidInstance("operation ids must be 1..n in order")
        if self.interval_length < 1:
            raise InvalidInstance("interval_length must be positive")
        if not limits:
            raise InvalidInstance("at least one metering interval is required")
        if any(e < 0 for e in limits):
            raise InvalidInstance("energy limits must be non-negative")
        if self.max_deviation < 0:
            raise InvalidInstance("max_deviation must be non-negative")
        if self.max_start < max(op.release for op in ops):
            raise TriviallyInfeasible(
                f"s_max={self.max_start} is below the largest release time"
            )

        scale = 1
        for op in ops:
            scale = math.lcm(scale, op.power.denominator)
        object.__setattr__(self, "scale", scale)
        arrays = {
            "release": np.array([op.release for op in ops], dtype=np.int64),
            "processing": np.array([op.processing for op in ops], dtype=np.int64),
            "due": np.array([op.due for op in ops], dtype=np.int64),
            "power_scaled": np.array([int(op.power * scale) for op in ops], dtype=np.int64),
            # energies are integers after scaling, so flooring the limit is exact
            "limit_scaled": np.array([math.floor(e * scale) for e in limits], dtype=np.int64),
        }
        for a in arrays.values():
            a.setflags(write=False)
        object.__setattr__(self, "_arrays", arrays)

    @property
    def n(self) -> int:
        return len(self.operations)

    @property
    def num_intervals(self) -> int:
        return len(self.energy_limits)

    @property
    def horizon(self) -> int:
        return self.interval_length * self.num_intervals

    @property
    def max_start(self) -> int:
        """Latest admissible baseline start, H - (n*dmax + max p)."""
        return self.horizon - (
            self.n * self.max_deviation + max(op.processing for op in self.operations)
        )

    # integer views used by the algorithms
    @property
    def release(self) -> np.ndarray:
        return self._arrays["release"]

    @property
    def processing(self) -> np.ndarray:
        return self._arrays["processing"]

    @property
    def due(self) -> np.ndarray:
        return self._arrays["due"]

    @property
    def power_scaled(self) -> np.ndarray:
        return self._arrays["power_scaled"]

    @property
    def limit_scaled(self) -> np.ndarray:
        return self._arrays["limit_scaled"]

    def interval_start(self, j: int) -> int:
        return j * self.interval_length

    def interval_end(self, j: int) -> int:
        return (j + 1) * self.interval_length

    def with_max_deviation(self, max_deviation: int) -> "Instance":
        return Instance(self.operations, self.interval_length, self.energy_limits, max_deviation)


def validate_permutation(perm: Sequence[int], n: int) -> Permutation:
    perm = tuple(int(i) for i in perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
    return perm


def validate_scenario(inst: Instance, deviations: Sequence[int]) -> tuple[int, ...]:
    deviations = tuple(int(d) for d in deviations)
    if len(deviations) != inst.n:
        raise ValueError("scenario length does not match the number of operations")
    if any(d < 0 or d > inst.max_deviation for d in deviations):
        raise ValueError(f"deviations must lie in [0, {inst.max_deviation}]")
    return deviations


@dataclass(frozen=True)
class BaselineSchedule:
    """Integer baseline start per operation and the order they run in."""

    starts: tuple[int, ...]
    perm: Permutation

    @classmethod
    def from_starts(cls, starts: Sequence[int]) -> "BaselineSchedule":
        starts = tuple(int(s) for s in starts)
        perm = tuple(sorted(range(len(starts)), key=lambda i: (starts[i], i)))
        return cls(starts, perm)

    @classmethod
    def from_positions(cls, perm: Sequence[int], starts_by_position: Sequence[int]) -> "BaselineSchedule":
        starts = [0] * len(perm)
        for op, s in zip(perm, starts_by_position):
            starts[op] = int(s)
        return cls(tuple(starts), tuple(int(i) for i in perm))

    def by_position(self) -> list[int]:
        return [self.starts[i] for i in self.perm]

    def validate(self, inst: Instance) -> None:
        """Raise InvalidSchedule unless the schedule is a valid baseline for ``inst``."""
        if len(self.starts) != inst.n:
            raise InvalidSchedule("schedule length does not match the instance")
        validate_permutation(self.perm, inst.n)
        p = inst.processing
        for i, s in enumerate(self.starts):
            if s < inst.release[i]:
                raise InvalidSchedule(f"operation {i + 1} starts before its release time")
            if s > inst.max_start:
                raise InvalidSchedule(f"operation {i + 1} starts after s_max={inst.max_start}")
        for a, b in zip(self.perm, self.perm[1:]):
            if self.starts[a] + p[a] > self.starts[b]:
                raise InvalidSchedule(f"operations {a + 1} and {b + 1} overlap")


@dataclass(frozen=True)
class RealisedSchedule:
    """Realised starts, defined for the first ``length`` positions of ``perm``."""

    perm: Permutation
    starts_by_position: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.starts_by_position)

    def start_of(self, op: int) -> Optional[int]:
        for i, s in zip(self.perm, self.starts_by_position):
            if i == op:
                return s
        return None

    def as_mapping(self) -> dict[int, int]:
        return dict(zip(self.perm, self.starts_by_position))


class Status(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    TIMED_OUT = "TimedOut"


@dataclass
class SolveResult:
    status: Status
    schedule: Optional[BaselineSchedule] = None
    objective: Optional[int] = None
    runtime: float = 0.0
    proven_optimal: bool = False
    counters: dict = field(default_factory=dict)

    @property
    def has_schedule(self) -> bool:
        return self.schedule is not None


def interval_intersection_length(a1: int, b1: int, a2: int, b2: int) -> int:
    return max(0, min(b1, b2) - max(a1, a2))


def operation_interval_intersection(inst: Instance, j: int, i: int, t: int) -> int:
    """Overlap of operation ``i`` started at ``t`` with metering interval ``j``."""
    d = inst.interval_length
    return interval_intersection_length(j * d, j * d + d, t, t + int(inst.processing[i]))


def realised_schedule(inst: Instance, base: BaselineSchedule, deviations: Sequence[int]) -> RealisedSchedule:
    p = inst.processing
    out = []
    prev_end = None
    for op in base.perm:
        start = base.starts[op] if prev_end is None else max(base.starts[op], prev_end)
        start += int(deviations[op])
        out.append(start)
        prev_end = start + int(p[op])
    return RealisedSchedule(base.perm, tuple(out))


def latest_start_schedule(inst: Instance, base: BaselineSchedule) -> RealisedSchedule:
    return realised_schedule(inst, base, [inst.max_deviation] * inst.n)


def right_shift_schedule(inst: Instance, base: BaselineSchedule, pos: int, t: int) -> RealisedSchedule:
    """Pin position ``pos`` at realised start ``t`` and push predecessors right.

    Only positions ``0..pos`` are defined in the result.
    """
    lst = latest_start_schedule(inst, base).starts_by_position
    lo = base.starts[base.perm[pos]]
    if not lo <= t <= lst[pos]:
        raise ValueError(f"shift time {t} outside [{lo}, {lst[pos]}]")
    p = inst.processing
    out = [0] * (pos + 1)
    out[pos] = t
    for k in range(pos - 1, -1, -1):
        out[k] = min(lst[k], out[k + 1] - int(p[base.perm[k]]))
    return RealisedSchedule(base.perm, tuple(out))


StartsLike = Union[BaselineSchedule, RealisedSchedule, Mapping[int, int], Sequence[int]]


def _start_items(starts: StartsLike):
    if isinstance(starts, BaselineSchedule):
        return enumerate(starts.starts)
    if isinstance(starts, RealisedSchedule):
        return zip(starts.perm, starts.starts_by_position)
    if isinstance(starts, Mapping):
        return starts.items()
    return enumerate(starts)


def interval_energy_scaled(inst: Instance, starts: StartsLike, j: int) -> int:
    d = inst.interval_length
    lo, hi = j * d, j * d + d
    p, pw = inst.processing, inst.power_scaled
    return sum(
        interval_intersection_length(lo, hi, t, t + int(p[i])) * int(pw[i])
        for i, t in _start_items(starts)
    )


def interval_energy(inst: Instance, starts: StartsLike, j: int) -> Fraction:
    """Energy consumed in interval ``j`` by every operation with a defined start."""
    return Fraction(interval_energy_scaled(inst, starts, j), inst.scale)


def total_tardiness(inst: Instance, base: BaselineSchedule) -> int:
    p, d = inst.processing, inst.due
    return sum(max(0, s + int(p[i]) - int(d[i])) for i, s in enumerate(base.starts))
