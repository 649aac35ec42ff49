import random

from hypothesis import given, settings, strategies as st

from lemmas import (
    check_lst_monotone,
    check_right_shift_dominates,
    check_right_shift_realisable,
    check_skipped_starts,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_lst_monotone_in_baseline(seed):
    check_lst_monotone(random.Random(seed))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_right_shift_is_a_realised_schedule(seed):
    check_right_shift_realisable(random.Random(seed))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_right_shift_dominates_energy(seed):
    check_right_shift_dominates(random.Random(seed))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_skipped_start_range_is_non_robust(seed):
    check_skipped_starts(random.Random(seed))
