"""Randomised checks of the structural lemmas, shared by the property and
acceptance suites.  Each check returns False when the drawn case is not
applicable and raises AssertionError on a counterexample."""

from conftest import random_baseline, random_instance
from resched.core import (
    BaselineSchedule,
    interval_energy,
    latest_start_schedule,
    realised_schedule,
    right_shift_schedule,
)
from resched.fixed_perm import first_violation
from resched.verification import is_robust


def later_baseline(rng, inst, base):
    """Same order, every start pushed right by a random amount."""
    p = inst.processing
    starts = []
    for k, op in enumerate(base.perm):
        s = base.starts[op] + rng.randint(0, 4)
        if k:
            s = max(s, starts[-1] + int(p[base.perm[k - 1]]))
        starts.append(s)
    return BaselineSchedule.from_positions(base.perm, starts)


def check_lst_monotone(rng) -> bool:
    inst = random_instance(rng)
    base = random_baseline(rng, inst)
    if base is None:
        return False
    later = later_baseline(rng, inst, base)
    a = latest_start_schedule(inst, base).starts_by_position
    b = latest_start_schedule(inst, later).starts_by_position
    assert all(x <= y for x, y in zip(a, b)), (inst, base, later)
    return True


def constructive_scenario(inst, base, shifted):
    p = inst.processing
    dev = [0] * inst.n
    for k, op in enumerate(base.perm[: len(shifted)]):
        ready = base.starts[op]
        if k:
            ready = max(ready, shifted[k - 1] + int(p[base.perm[k - 1]]))
        dev[op] = shifted[k] - ready
    return dev


def check_right_shift_realisable(rng) -> bool:
    inst = random_instance(rng)
    base = random_baseline(rng, inst)
    if base is None:
        return False
    lst = latest_start_schedule(inst, base).starts_by_position
    pos = rng.randrange(inst.n)
    t = rng.randint(base.starts[base.perm[pos]], lst[pos])
    shifted = right_shift_schedule(inst, base, pos, t).starts_by_position
    dev = constructive_scenario(inst, base, shifted)
    assert all(0 <= d <= inst.max_deviation for d in dev), (inst, base, pos, t, dev)
    real = realised_schedule(inst, base, dev).starts_by_position
    assert real[: pos + 1] == shifted
    return True


def check_right_shift_dominates(rng) -> bool:
    inst = random_instance(rng)
    base = random_baseline(rng, inst)
    if base is None:
        return False
    dev = [rng.randint(0, inst.max_deviation) for _ in range(inst.n)]
    real = realised_schedule(inst, base, dev)
    p, D = inst.processing, inst.interval_length
    for j in range(inst.num_intervals):
        lo, hi = j * D, j * D + D
        touching = [k for k, op in enumerate(base.perm)
                    if min(hi, real.starts_by_position[k] + int(p[op])) > max(lo, real.starts_by_position[k])]
        if not touching:
            continue
        top = touching[-1]
        shifted = right_shift_schedule(inst, base, top, real.starts_by_position[top])
        assert interval_energy(inst, shifted, j) >= interval_energy(inst, real, j), (inst, base, dev, j)
    return True


def check_skipped_starts(rng) -> bool:
    inst = random_instance(rng)
    base = random_baseline(rng, inst)
    if base is None:
        return False
    v = is_robust(inst, base)
    if v.robust or v.position == 0:
        return False
    perm = base.perm
    prev, cur = perm[v.position - 1], perm[v.position]
    real = realised_schedule(inst, base, v.scenario).starts_by_position
    if real[v.position - 1] + int(inst.processing[prev]) <= inst.interval_start(v.interval):
        return False
    head = list(perm[: v.position + 1])
    prefix = [base.starts[o] for o in head[:-1]]
    first = max(int(inst.release[cur]), base.starts[prev] + int(inst.processing[prev]))
    for s in range(first, v.shift_time + 1):
        assert first_violation(inst, head, prefix + [s]) is not None, (inst, base, s)
    return True


LEMMA_CHECKS = {
    "lst-monotone": check_lst_monotone,
    "right-shift-realisable": check_right_shift_realisable,
    "right-shift-dominates": check_right_shift_dominates,
    "skipped-starts-non-robust": check_skipped_starts,
}


def run_trials(check, rng, trials: int) -> int:
    done = 0
    while done < trials:
        done += bool(check(rng))
    return done
