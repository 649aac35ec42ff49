import random
from fractions import Fraction

import pytest

from resched.core import BaselineSchedule, Instance, Operation, TriviallyInfeasible, interval_energy_scaled
from resched.generator import GenConfig, generate_instance


def worked_instance(max_deviation=3):
    # (release, due, processing, power)
    rows = [(0, 5, 2, 50), (6, 10, 2, 70), (8, 15, 7, 150), (10, 17, 4, 120), (18, 30, 3, 30)]
    ops = tuple(Operation(k + 1, r, p, d, Fraction(w)) for k, (r, d, p, w) in enumerate(rows))
    return Instance(ops, 15, (Fraction(1200),) * 5, max_deviation)


WORKED_BASELINE = BaselineSchedule.from_starts([0, 6, 9, 16, 20])


def motivating_instance(max_deviation=3):
    """Four operations in three intervals; the second one is energy hungry."""
    ops = (
        Operation(1, 0, 5, 10, Fraction(4)),
        Operation(2, 0, 5, 15, Fraction(10)),
        Operation(3, 0, 5, 20, Fraction(2)),
        Operation(4, 0, 5, 25, Fraction(10)),
    )
    return Instance(ops, 15, (Fraction(100), Fraction(70), Fraction(100)), max_deviation)


MOTIVATING_BASELINE = BaselineSchedule.from_starts([5, 10, 15, 20])


def random_instance(rng: random.Random, max_n=5, dmax=None, n=None):
    """Small adversarial instance: short intervals, long operations, tight limits."""
    while True:
        k = n if n is not None else rng.randint(1, max_n)
        D = rng.choice([3, 5, 10, 15])
        dm = rng.randint(0, 3) if dmax is None else dmax
        M = rng.randint(2, max(2, 90 // D))
        ops = []
        for i in range(k):
            p = rng.randint(1, 2 * D)
            r = rng.randint(0, M * D // 3)
            power = Fraction(rng.choice([0, 1, 2, 3, 5, 7, 10]), rng.choice([1, 2, 4]))
            ops.append(Operation(i + 1, r, p, r + p + rng.randint(0, 10), power))
        limits = [Fraction(rng.randint(0, 30), rng.choice([1, 2])) for _ in range(M)]
        try:
            return Instance(tuple(ops), D, tuple(limits), dm)
        except TriviallyInfeasible:
            continue


def generated_instance(rng: random.Random, n_range=(3, 7), deviations=(0, 1, 3), seed=0):
    cfg = GenConfig(
        rng.randint(*n_range),
        rng.choice([0.6, 0.9]),
        rng.choice([0.1, 0.3]),
        rng.choice([0.1, 0.3, 0.5]),
        rng.choice(deviations),
        seed=seed,
    )
    return generate_instance(cfg)


def random_baseline(rng: random.Random, inst: Instance, max_gap=6):
    """Random valid baseline schedule or None if it overshoots s_max."""
    perm = list(range(inst.n))
    rng.shuffle(perm)
    starts = [0] * inst.n
    t = 0
    for op in perm:
        t = max(t, int(inst.release[op])) + rng.randint(0, max_gap)
        starts[op] = t
        t += int(inst.processing[op])
    if max(starts) > inst.max_start:
        return None
    return BaselineSchedule.from_starts(starts)


@pytest.fixture
def worked():
    return worked_instance()


@pytest.fixture
def rng():
    return random.Random(12345)


def earliest_nominal_schedule(inst, perm):
    """Earliest starts that keep every limit with no deviations at all."""
    starts = {}
    free = 0
    for op in perm:
        t = max(int(inst.release[op]), free)
        while True:
            if t > inst.max_start:
                return None
            trial = dict(starts)
            trial[op] = t
            if all(interval_energy_scaled(inst, trial, j) <= inst.limit_scaled[j]
                   for j in range(inst.num_intervals)):
                break
            t += 1
        starts[op] = t
        free = t + int(inst.processing[op])
    return BaselineSchedule.from_positions(perm, [starts[op] for op in perm])
