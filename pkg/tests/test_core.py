import random
from fractions import Fraction

import pytest

from conftest import WORKED_BASELINE, random_baseline, random_instance, worked_instance
from resched.core import (
    BaselineSchedule,
    Instance,
    InvalidInstance,
    InvalidSchedule,
    Operation,
    TriviallyInfeasible,
    interval_energy,
    interval_intersection_length,
    latest_start_schedule,
    operation_interval_intersection,
    realised_schedule,
    right_shift_schedule,
    total_tardiness,
    validate_scenario,
)


def recursive_realised(inst, starts, perm, dev):
    """Independent evaluator: walk the order, tracking the machine's free time."""
    out = {}
    free = None
    for op in perm:
        begin = starts[op] if free is None else max(starts[op], free)
        out[op] = begin + dev[op]
        free = out[op] + int(inst.processing[op])
    return out


@pytest.mark.parametrize("args,expected", [
    ((0, 15, 12, 19), 3),
    ((0, 15, 20, 23), 0),
    ((15, 30, 21, 25), 4),
    ((0, 15, 15, 20), 0),
])
def test_interval_intersection_length(args, expected):
    assert interval_intersection_length(*args) == expected


def test_operation_interval_intersection(worked):
    assert operation_interval_intersection(worked, 1, 2, 12) == 4
    assert operation_interval_intersection(worked, 1, 4, 25) == 3
    assert operation_interval_intersection(worked, 1, 2, 30) == 0


def test_worked_realised_schedule(worked):
    real = realised_schedule(worked, WORKED_BASELINE, (3, 0, 3, 2, 0))
    assert real.starts_by_position == (3, 6, 12, 21, 25)
    assert interval_energy(worked, real, 0) == 690
    assert interval_energy(worked, real, 1) == 1170
    assert total_tardiness(worked, WORKED_BASELINE) == 4


def test_zero_scenario_reproduces_baseline(worked):
    real = realised_schedule(worked, WORKED_BASELINE, (0,) * 5)
    assert real.as_mapping() == dict(enumerate(WORKED_BASELINE.starts))


def test_latest_start_schedule(worked):
    assert latest_start_schedule(worked, WORKED_BASELINE).starts_by_position == (3, 9, 14, 24, 31)
    flat = worked.with_max_deviation(0)
    assert latest_start_schedule(flat, WORKED_BASELINE).starts_by_position == tuple(WORKED_BASELINE.by_position())


def test_right_shift_schedule(worked):
    assert right_shift_schedule(worked, WORKED_BASELINE, 0, 3).starts_by_position == (3,)
    assert right_shift_schedule(worked, WORKED_BASELINE, 2, 14).starts_by_position == (3, 9, 14)
    with pytest.raises(ValueError):
        right_shift_schedule(worked, WORKED_BASELINE, 2, 15)
    with pytest.raises(ValueError):
        right_shift_schedule(worked, WORKED_BASELINE, 2, 8)


def test_empty_prefix_energy_is_zero(worked):
    assert interval_energy(worked, {}, 2) == 0


def test_random_realised_matches_recursion():
    rng = random.Random(7)
    checked = 0
    while checked < 300:
        inst = random_instance(rng)
        base = random_baseline(rng, inst)
        if base is None:
            continue
        dev = [rng.randint(0, inst.max_deviation) for _ in range(inst.n)]
        real = realised_schedule(inst, base, dev)
        assert real.as_mapping() == recursive_realised(inst, base.starts, base.perm, dev)
        for i in range(inst.n):
            assert real.start_of(i) - base.starts[i] >= dev[i]
        checked += 1


def test_lst_dominates_sampled_scenarios():
    rng = random.Random(8)
    for _ in range(50):
        inst = random_instance(rng)
        base = random_baseline(rng, inst)
        if base is None:
            continue
        lst = latest_start_schedule(inst, base).as_mapping()
        for _ in range(200):
            dev = [rng.randint(0, inst.max_deviation) for _ in range(inst.n)]
            real = realised_schedule(inst, base, dev).as_mapping()
            assert all(real[i] <= lst[i] for i in range(inst.n))


def test_total_tardiness_formula():
    rng = random.Random(9)
    for _ in range(100):
        inst = random_instance(rng)
        base = random_baseline(rng, inst)
        if base is None:
            continue
        expected = 0
        for op, s in zip(inst.operations, base.starts):
            expected += max(0, s + op.processing - op.due)
        assert total_tardiness(inst, base) == expected


def test_on_time_schedule_has_no_tardiness():
    ops = (Operation(1, 0, 3, 3, 1), Operation(2, 2, 4, 10, 1))
    inst = Instance(ops, 15, (100,), 0)
    assert total_tardiness(inst, BaselineSchedule.from_starts([0, 5])) == 0


def test_energy_additivity():
    rng = random.Random(10)
    for _ in range(200):
        inst = random_instance(rng)
        base = random_baseline(rng, inst)
        if base is None:
            continue
        dev = [rng.randint(0, inst.max_deviation) for _ in range(inst.n)]
        real = realised_schedule(inst, base, dev)
        total = sum(interval_energy(inst, real, j) for j in range(inst.num_intervals))
        expected = sum(op.processing * op.power for op in inst.operations)
        assert total == expected


def test_energy_is_exact_rational():
    ops = (Operation(1, 0, 3, 3, Fraction(1, 3)), Operation(2, 0, 2, 9, Fraction(1, 10)))
    inst = Instance(ops, 5, (Fraction(6, 5),) * 4, 0)
    base = BaselineSchedule.from_starts([0, 3])
    assert interval_energy(inst, base, 0) == Fraction(1) + Fraction(1, 5)
    assert inst.limit_scaled[0] == inst.power_scaled[0] * 3 + inst.power_scaled[1] * 2


def test_float_powers_use_their_decimal_value():
    op = Operation(1, 0, 1, 1, 0.1)
    assert op.power == Fraction(1, 10)


def test_instance_validation():
    op = Operation(1, 0, 5, 5, 1)
    with pytest.raises(InvalidInstance):
        Instance((), 15, (100,), 0)
    with pytest.raises(InvalidInstance):
        Instance((Operation(2, 0, 5, 5, 1),), 15, (100,), 0)
    with pytest.raises(InvalidInstance):
        Instance((op,), 15, (-1,), 0)
    with pytest.raises(InvalidInstance):
        Operation(1, 0, 0, 5, 1)
    with pytest.raises(InvalidInstance):
        Operation(1, 0, 1, 5, -1)
    with pytest.raises(TriviallyInfeasible):
        Instance((Operation(1, 10, 5, 20, 1),), 5, (100, 100), 1)


def test_max_start(worked):
    assert worked.horizon == 75
    assert worked.max_start == 75 - (5 * 3 + 7)


def test_schedule_validation(worked):
    WORKED_BASELINE.validate(worked)
    with pytest.raises(InvalidSchedule):
        BaselineSchedule.from_starts([0, 6, 9, 10, 20]).validate(worked)
    with pytest.raises(InvalidSchedule):
        BaselineSchedule.from_starts([0, 5, 9, 16, 20]).validate(worked)
    with pytest.raises(InvalidSchedule):
        BaselineSchedule.from_starts([0, 6, 9, 16, 60]).validate(worked)


def test_scenario_validation(worked):
    assert validate_scenario(worked, [0, 1, 2, 3, 0]) == (0, 1, 2, 3, 0)
    with pytest.raises(ValueError):
        validate_scenario(worked, [0, 1, 2, 4, 0])
    with pytest.raises(ValueError):
        validate_scenario(worked, [0, 1])


def test_instance_arrays_are_read_only(worked):
    with pytest.raises(ValueError):
        worked.release[0] = 3
    assert worked_instance(0).max_deviation == 0
