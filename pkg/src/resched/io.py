"""JSON formats for instances, solve results and generator manifests.

Files are written canonically (two-space indent, fixed key order, trailing
newline) so that parse-then-write reproduces a written file byte for byte.
Operation ids are 1-based; ``starts`` lists are ordered by operation id.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .core import BaselineSchedule, Instance, InvalidInstance, Operation, SolveResult
from .generator import GENERATOR_VERSION, POWER_DENOMINATOR

PathLike = Union[str, Path]


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _limit_out(e: Fraction):
    return e.numerator if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def _limit_in(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InvalidInstance(f"energy limit {v!r} must be an integer or a 'p/q' string")
    try:
        return Fraction(v)
    except ValueError as exc:
        raise InvalidInstance(f"bad energy limit {v!r}") from exc


def instance_to_dict(inst: Instance) -> dict:
    ops = []
    for op in inst.operations:
        milli = op.power * POWER_DENOMINATOR
        if milli.denominator != 1:
            raise InvalidInstance(f"operation {op.id}: power {op.power} is not a multiple of 1/1000")
        ops.append({
            "id": op.id,
            "release": op.release,
            "processing": op.processing,
            "due": op.due,
            "power_milli": milli.numerator,
        })
    return {
        "n": inst.n,
        "interval_length": inst.interval_length,
        "num_intervals": inst.num_intervals,
        "energy_limits": [_limit_out(e) for e in inst.energy_limits],
        "max_deviation": inst.max_deviation,
        "operations": ops,
    }


def _int(d: dict, key: str) -> int:
    v = d.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInstance(f"field {key!r} must be an integer, got {v!r}")
    return v


def instance_from_dict(data: dict) -> Instance:
    try:
        ops = tuple(
            Operation(
                id=_int(o, "id"),
                release=_int(o, "release"),
                processing=_int(o, "processing"),
                due=_int(o, "due"),
                power=Fraction(_int(o, "power_milli"), POWER_DENOMINATOR),
            )
            for o in data["operations"]
        )
        limits = tuple(_limit_in(e) for e in data["energy_limits"])
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"malformed instance: {exc}") from exc
    if _int(data, "n") != len(ops):
        raise InvalidInstance("n does not match the number of operations")
    if _int(data, "num_intervals") != len(limits):
        raise InvalidInstance("num_intervals does not match the number of energy limits")
    return Instance(ops, _int(data, "interval_length"), limits, _int(data, "max_deviation"))


def dumps_instance(inst: Instance) -> str:
    return _dump(instance_to_dict(inst))


def loads_instance(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def read_instance(path: PathLike) -> Instance:
    return loads_instance(Path(path).read_text())


def write_instance(inst: Instance, path: PathLike) -> None:
    Path(path).write_text(dumps_instance(inst))


def result_to_dict(algorithm: str, result: SolveResult, include_runtime: bool = True) -> dict:
    return {
        "algorithm": algorithm,
        "status": result.status.value,
        "objective": result.objective,
        "starts": list(result.schedule.starts) if result.schedule is not None else None,
        "robust": result.schedule is not None,
        "proven_optimal": result.proven_optimal,
        "runtime_ms": round(result.runtime * 1000, 3) if include_runtime else None,
        "counters": result.counters,
        "generator_version": GENERATOR_VERSION,
    }


def dumps_result(algorithm: str, result: SolveResult, include_runtime: bool = True) -> str:
    return _dump(result_to_dict(algorithm, result, include_runtime))


def read_schedule(path: PathLike) -> BaselineSchedule:
    """Starts from a result file (or any JSON object with a ``starts`` list)."""
    data = json.loads(Path(path).read_text())
    starts = data.get("starts") if isinstance(data, dict) else None
    if not isinstance(starts, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in starts):
        raise ValueError("schedule file needs an integer 'starts' list")
    return BaselineSchedule.from_starts(starts)


def dumps_manifest(entries: list[dict]) -> str:
    return _dump({"generator_version": GENERATOR_VERSION, "instances": entries})


def read_manifest(path: PathLike) -> tuple[Path, list[dict]]:
    """Return the manifest's directory and its instance entries."""
    path = Path(path)
    data = json.loads(path.read_text())
    return path.parent, list(data.get("instances", []))


def rational_text(x: Fraction) -> str:
    """Shortest decimal when exact (``0.1``), else ``p/q``."""
    f = float(x)
    return repr(f) if Fraction(repr(f)) == x else f"{x.numerator}/{x.denominator}"


def manifest_entry(file: str, cfg=None, seed: Optional[int] = None) -> dict:
    entry: dict = {"file": file}
    if cfg is not None:
        entry.update({
            "n": cfg.n,
            "alpha1": rational_text(cfg.alpha1),
            "alpha2": rational_text(cfg.alpha2),
            "alpha3": rational_text(cfg.alpha3),
            "max_deviation": cfg.max_deviation,
            "seed": cfg.seed if seed is None else seed,
        })
    return entry
