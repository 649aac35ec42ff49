"""MILP backends behind a small adapter interface.

An adapter builds a pure 0/1 minimisation model and solves it while
offering every integer candidate to a callback before accepting it.  The
callback returns a list of lazy constraints ``(indices, coeffs, sense, rhs)``;
an empty list accepts the candidate.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Sequence

import numpy as np
from scipy import optimize, sparse

ENV_VAR = "RESCHED_MILP_ADAPTER"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
TIME_LIMIT = "time_limit"

Row = tuple[Sequence[int], Sequence[float], str, float]
Callback = Callable[[Sequence[float]], list[Row]]


class AdapterUnavailable(RuntimeError):
    """No usable MILP backend is configured."""


@dataclass
class AdapterResult:
    status: str
    values: Optional[list[float]] = None
    objective: Optional[float] = None
    candidates: int = 0
    lazy_rows: int = 0


class SolverAdapter(Protocol):
    name: str

    def add_binary_var(self, objective_coeff: float) -> int: ...

    def add_linear_constraint(self, indices: Sequence[int], coeffs: Sequence[float], sense: str, rhs: float) -> None: ...

    def set_time_limit(self, seconds: Optional[float]) -> None: ...

    def solve_with_integer_callback(self, callback: Callback) -> AdapterResult: ...


class ScipyAdapter:
    """HiGHS through ``scipy.optimize.milp``.

    scipy exposes no in-search callbacks, so lazy constraints are emulated by
    re-solving: each optimal integer solution is passed to the callback and
    any returned rows are added before the next solve.  The first solution the
    callback accepts is optimal for the full model.  Callbacks therefore run
    serially.
    """

    name = "scipy"

    def __init__(self):
        self._obj: list[float] = []
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._lo: list[float] = []
        self._hi: list[float] = []
        self._time_limit: Optional[float] = None

    def add_binary_var(self, objective_coeff: float) -> int:
        self._obj.append(float(objective_coeff))
        return len(self._obj) - 1

    def add_linear_constraint(self, indices, coeffs, sense, rhs) -> None:
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown sense {sense!r}")
        row = len(self._lo)
        self._rows.extend([row] * len(indices))
        self._cols.extend(int(k) for k in indices)
        self._vals.extend(float(c) for c in coeffs)
        self._lo.append(-np.inf if sense == "<=" else float(rhs))
        self._hi.append(np.inf if sense == ">=" else float(rhs))

    def set_time_limit(self, seconds: Optional[float]) -> None:
        self._time_limit = seconds

    def _solve_once(self, deadline):
        n = len(self._obj)
        options = {"mip_rel_gap": 0.0}
        if deadline is not None:
            left = deadline - time.perf_counter()
            if left <= 0:
                return None
            options["time_limit"] = left
        constraints = ()
        if self._lo:
            a = sparse.csr_array((self._vals, (self._rows, self._cols)), shape=(len(self._lo), n))
            constraints = optimize.LinearConstraint(a, self._lo, self._hi)
        return optimize.milp(
            np.asarray(self._obj),
            integrality=np.ones(n),
            bounds=optimize.Bounds(0, 1),
            constraints=constraints,
            options=options,
        )

    def solve_with_integer_callback(self, callback: Callback) -> AdapterResult:
        deadline = None if self._time_limit is None else time.perf_counter() + self._time_limit
        out = AdapterResult(TIME_LIMIT)
        while True:
            res = self._solve_once(deadline)
            if res is None or res.status == 1:
                out.status = TIME_LIMIT
                return out
            if res.status == 2:
                out.status = INFEASIBLE
                return out
            if res.status != 0:
                raise RuntimeError(f"HiGHS failed: {res.message}")
            values = [float(v) for v in np.round(res.x)]
            out.candidates += 1
            rows = callback(values)
            if not rows:
                out.status, out.values, out.objective = OPTIMAL, values, float(res.fun)
                return out
            for idx, coef, sense, rhs in rows:
                self.add_linear_constraint(idx, coef, sense, rhs)
                out.lazy_rows += 1


_REGISTRY: dict[str, Callable[[], SolverAdapter]] = {"scipy": ScipyAdapter}
DEFAULT_ADAPTER = "scipy"


def available_adapters() -> list[str]:
    return sorted(_REGISTRY)


def get_adapter(name: Optional[str] = None) -> SolverAdapter:
    """Adapter named by ``name``, else by the environment, else the default.

    Setting the environment variable to ``none`` disables LBBD.
    """
    if name is None:
        name = os.environ.get(ENV_VAR, DEFAULT_ADAPTER)
    factory = _REGISTRY.get(name.strip().lower())
    if factory is None:
        raise AdapterUnavailable(
            f"MILP adapter {name!r} is not available (known: {', '.join(available_adapters())})"
        )
    return factory()
