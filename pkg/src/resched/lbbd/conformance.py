"""Checks any SolverAdapter must pass before LBBD may use it.

``check_adapter(factory)`` raises AssertionError on the first failure.
"""

from __future__ import annotations

from .adapters import INFEASIBLE, OPTIMAL, TIME_LIMIT


def _knapsack(factory):
    a = factory()
    xs = [a.add_binary_var(-v) for v in (6, 5, 4)]
    a.add_linear_constraint(xs, [5, 4, 3], "<=", 7)
    res = a.solve_with_integer_callback(lambda v: [])
    assert res.status == OPTIMAL, res.status
    assert [round(v) for v in res.values] == [0, 1, 1], res.values
    assert abs(res.objective + 9) < 1e-6


def _lazy_rows(factory):
    # pick one of four items; the callback forbids each candidate in turn
    a = factory()
    xs = [a.add_binary_var(c) for c in (1, 2, 3, 4)]
    a.add_linear_constraint(xs, [1, 1, 1, 1], "==", 1)
    seen = []

    def cb(values):
        k = next(i for i, v in enumerate(values) if v >= 0.5)
        seen.append(k)
        return [([xs[k]], [1], "<=", 0)] if k < 2 else []

    res = a.solve_with_integer_callback(cb)
    assert res.status == OPTIMAL
    assert seen == [0, 1, 2], seen
    assert round(res.values[2]) == 1


def _infeasible(factory):
    a = factory()
    x = a.add_binary_var(1)
    y = a.add_binary_var(1)
    a.add_linear_constraint([x, y], [1, 1], ">=", 3)
    assert a.solve_with_integer_callback(lambda v: []).status == INFEASIBLE


def _zero_time(factory):
    a = factory()
    a.add_binary_var(1)
    a.set_time_limit(0.0)
    assert a.solve_with_integer_callback(lambda v: []).status == TIME_LIMIT


def check_adapter(factory) -> None:
    for check in (_knapsack, _lazy_rows, _infeasible, _zero_time):
        check(factory)
