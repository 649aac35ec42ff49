import random

import pytest

from conftest import generated_instance
from resched.core import Instance, Operation, Status
from resched.generator import GenConfig, generate_instance
from resched.heuristics import (
    TabuParams,
    edf_order,
    edf_schedule,
    greedy_initial,
    greedy_schedule,
    tabu_search,
)
from resched.verification import brute_force_optimum, is_robust


def test_edf_on_worked(worked):
    res = edf_schedule(worked)
    assert res.schedule.perm == (0, 1, 2, 3, 4)
    assert is_robust(worked, res.schedule).robust


def test_edf_ties_use_release_then_index():
    ops = (
        Operation(1, 4, 1, 10, 1),
        Operation(2, 2, 1, 10, 1),
        Operation(3, 2, 1, 10, 1),
        Operation(4, 0, 1, 5, 1),
    )
    inst = Instance(ops, 15, (100, 100), 0)
    assert edf_order(inst) == (3, 1, 2, 0)


def test_single_operation_heuristics():
    inst = Instance((Operation(1, 3, 4, 5, 2),), 15, (100,), 1)
    assert greedy_initial(inst) == (0,)
    assert tabu_search(inst).schedule.starts == (3,)


def test_greedy_empty_when_every_candidate_fails():
    inst = Instance((Operation(1, 0, 10, 10, 3),), 5, (10,) * 6, 0)
    assert greedy_initial(inst) is None
    assert greedy_schedule(inst).status is Status.INFEASIBLE
    assert tabu_search(inst).status is Status.INFEASIBLE


def test_greedy_prefers_earlier_completion_on_ties():
    # both candidates give bound 0; operation 2 completes first
    ops = (Operation(1, 0, 3, 50, 1), Operation(2, 0, 2, 50, 1))
    inst = Instance(ops, 15, (100, 100), 0)
    assert greedy_initial(inst) == (1, 0)


def test_sweep_bounds_and_hit_rate():
    rng = random.Random(61)
    hits = total = 0
    for k in range(60):
        inst = generated_instance(rng, seed=k)
        opt = brute_force_optimum(inst)
        if opt.schedule is None:
            continue
        total += 1
        edf, greedy = edf_schedule(inst), greedy_schedule(inst)
        tabu = tabu_search(inst, TabuParams(seed=k))
        for res in (edf, greedy, tabu):
            if res.schedule is not None:
                assert res.objective >= opt.objective
                assert is_robust(inst, res.schedule).robust
        if greedy.schedule is not None:
            assert tabu.objective <= greedy.objective
        hits += tabu.objective == opt.objective
    assert hits >= 0.9 * total


def test_greedy_beats_edf_on_most_instances():
    better = 0
    for k in range(50):
        inst = generate_instance(GenConfig(15, 0.6, 0.3, 0.3, 3, seed=1000 + k))
        g, e = greedy_schedule(inst), edf_schedule(inst)
        if g.schedule is not None and (e.schedule is None or g.objective <= e.objective):
            better += 1
    assert better > 25


def test_tabu_is_deterministic_and_respects_the_list():
    inst = generate_instance(GenConfig(12, 0.6, 0.1, 0.3, 3, seed=5))
    params = TabuParams(restarts=2, iterations=40, neighbourhood=20, tabu_len=5, seed=99)
    t1, t2 = [], []
    a = tabu_search(inst, params, trace=t1)
    b = tabu_search(inst, params, trace=t2)
    assert a.schedule == b.schedule and a.objective == b.objective
    assert t1 == t2
    assert len(t1) == 80
    for step in t1:
        assert len(step.tabu_before) <= 5
        if step.chosen is not None:
            assert step.chosen not in step.tabu_before


def test_stop_rule_without_improvement():
    inst = generate_instance(GenConfig(10, 0.6, 0.1, 0.3, 3, seed=6))
    trace = []
    tabu_search(inst, TabuParams(restarts=1, stop_no_improve=5, seed=1), trace=trace)
    best, stale = None, 0
    for step in trace:
        if step.objective is not None and (best is None or step.objective < best):
            best, stale = step.objective, 0
        else:
            stale += 1
    assert stale == 5


def test_params_validation():
    with pytest.raises(ValueError):
        TabuParams(restarts=0)
    with pytest.raises(ValueError):
        TabuParams(stop_no_improve=0)
    with pytest.raises(ValueError):
        TabuParams(seed=-1)
