"""Random instance generator.

Draws follow the benchmark recipe: processing times uniform on 1..D,
exponential interarrival times with mean ``alpha1 * sum(p) / n``, due-date
slack uniform on ``0..ceil(alpha2 * sum(p))`` and powers uniform on
``[alpha3 * E / p, E / p]``.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence`` with a
spawn key ``(attempt, field)``, so each field has its own substream and adding
a field never perturbs the draws of the others.  Interarrival draws use the
inverse CDF and are rounded half-up; the first release is the first rounded
draw.  Powers are quantised to multiples of 1/1000.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import Instance, Operation, TriviallyInfeasible, as_fraction

GENERATOR_VERSION = "resched-gen/1"
POWER_DENOMINATOR = 1000
MAX_ATTEMPTS = 100

_FIELD_PROCESSING = 0
_FIELD_INTERARRIVAL = 1
_FIELD_DUE = 2
_FIELD_POWER = 3

PAPER_ALPHA1 = (0.6, 0.9)
PAPER_ALPHA2 = (0.1, 0.3)
PAPER_ALPHA3 = (0.1, 0.3, 0.5)
PAPER_DEVIATIONS = (0, 3, 5)
PAPER_SAMPLES = 10


@dataclass(frozen=True)
class GenConfig:
    n: int
    alpha1: Fraction
    alpha2: Fraction
    alpha3: Fraction
    max_deviation: int
    seed: int
    interval_length: int = 15
    intervals_per_op: int = 3
    energy_limit: Fraction = Fraction(100)

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "energy_limit"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0 < self.alpha3 <= 1:
            raise ValueError("alpha3 must lie in (0, 1]")
        if self.alpha1 <= 0 or self.alpha2 < 0:
            raise ValueError("alpha1 must be positive and alpha2 non-negative")
        if self.max_deviation < 0 or self.interval_length < 1 or self.intervals_per_op < 1:
            raise ValueError("invalid deviation or interval settings")
        if self.energy_limit <= 0:
            raise ValueError("energy_limit must be positive")


def _stream(seed: int, attempt: int, fld: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(attempt, fld))
    return np.random.Generator(np.random.PCG64(ss))


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _draw(cfg: GenConfig, attempt: int) -> list[Operation]:
    n, D, E = cfg.n, cfg.interval_length, cfg.energy_limit
    proc = _stream(cfg.seed, attempt, _FIELD_PROCESSING).integers(1, D + 1, size=n)
    total = int(proc.sum())

    mean_gap = float(cfg.alpha1) * total / n
    u = _stream(cfg.seed, attempt, _FIELD_INTERARRIVAL).random(n)
    gaps = [_round_half_up(-mean_gap * math.log1p(-x)) for x in u]
    releases = list(itertools.accumulate(gaps))

    slack_max = math.ceil(cfg.alpha2 * total)
    slack = _stream(cfg.seed, attempt, _FIELD_DUE).integers(0, slack_max + 1, size=n)

    u = _stream(cfg.seed, attempt, _FIELD_POWER).random(n)
    ops = []
    for i in range(n):
        p = int(proc[i])
        lo_m = math.ceil(cfg.alpha3 * E * POWER_DENOMINATOR / p)
        hi_m = math.floor(E * POWER_DENOMINATOR / p)
        lo_m = min(lo_m, hi_m)
        milli = _round_half_up((lo_m + float(u[i]) * (hi_m - lo_m)))
        milli = min(max(milli, lo_m), hi_m)
        ops.append(Operation(
            id=i + 1,
            release=releases[i],
            processing=p,
            due=releases[i] + p + int(slack[i]),
            power=Fraction(milli, POWER_DENOMINATOR),
        ))
    return ops


def generate_instance(cfg: GenConfig) -> Instance:
    """Draw an instance; redraws (new substream) if it would be trivially infeasible."""
    m = cfg.intervals_per_op * cfg.n
    for attempt in range(MAX_ATTEMPTS):
        ops = _draw(cfg, attempt)
        try:
            return Instance(tuple(ops), cfg.interval_length, (cfg.energy_limit,) * m, cfg.max_deviation)
        except TriviallyInfeasible:
            continue
    raise RuntimeError(f"no admissible instance after {MAX_ATTEMPTS} attempts for {cfg}")


def paper_grid(n: int, seed: int = 0, samples: int = PAPER_SAMPLES) -> Iterator[tuple[GenConfig, Instance]]:
    """The 2x2x3 alpha grid, ``samples`` draws each, at every deviation 0, 3, 5.

    The three instances of one draw differ only in ``max_deviation``.
    """
    combo = 0
    for a1 in PAPER_ALPHA1:
        for a2 in PAPER_ALPHA2:
            for a3 in PAPER_ALPHA3:
                for k in range(samples):
                    cfg = GenConfig(n, a1, a2, a3, max(PAPER_DEVIATIONS),
                                    seed=seed * 1_000_000 + combo * 1000 + k)
                    base = generate_instance(cfg)
                    for dmax in PAPER_DEVIATIONS:
                        yield replace(cfg, max_deviation=dmax), base.with_max_deviation(dmax)
                combo += 1
