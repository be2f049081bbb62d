"""Scaling benchmark for the Horn-NC solver."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .core import Formula, count_literals
from .generate import GenConfig, Mode, gen_cascade, gen_random
from .hornnc import is_horn_nc_pattern
from .solver import solve


@dataclass
class BenchRow:
    n: int                  # literal count of the generated instance
    seconds: float          # solver wall time
    recognize_seconds: float
    steps: int
    rur_steps: int
    status: str


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)
    exponent: Optional[float] = None


def bench_config(seed: int = 1) -> GenConfig:
    """Settings for the ``random`` family: wide conjunctive HNCs."""
    return GenConfig(seed=seed, props=200, depth=12, arity=6, k=20,
                     mode=Mode.CONJUNCTIVE_HNC, exact=True, positive_rate=0.5)


FAMILIES = ("cascade", "random")


def bench_instance(n: int, cfg: GenConfig, family: str = "cascade") -> Formula:
    """A conjunctive HNC with about ``n`` literals.

    ``cascade`` (layered implications, see ``gen_cascade``) keeps unit
    resolution busy; ``random`` uses ``gen_random`` in conjunctive mode and
    mostly ends in an early clash or an early fixpoint.
    """
    if family == "cascade":
        return gen_cascade(n, seed=cfg.seed, k=cfg.k)
    if family == "random":
        return gen_random(replace(cfg, literals=n, exact=True, mode=Mode.CONJUNCTIVE_HNC))
    raise ValueError(f"unknown bench family {family!r}")


def fit_exponent(ns: Sequence[int], times: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(time) against log(n); None below two sizes."""
    if len(ns) < 2:
        return None
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.maximum(np.asarray(times, dtype=float), 1e-9))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def bench(sizes: Sequence[int], cfg: Optional[GenConfig] = None,
          family: str = "cascade") -> BenchReport:
    """Time the solver (and the recognizer) on one instance per size.

    The solve time covers the whole ``solve`` call (class check, tree copy,
    engine, model verification) but not generation.
    """
    cfg = cfg or bench_config()
    rows = []
    for n in sorted(sizes):
        phi = bench_instance(n, cfg, family)
        t0 = time.perf_counter()
        verdict = is_horn_nc_pattern(phi)
        t1 = time.perf_counter()
        assert verdict.is_hnc
        result = solve(phi, trace=False)
        t2 = time.perf_counter()
        rows.append(BenchRow(count_literals(phi), t2 - t1, t1 - t0,
                             result.steps, result.rur_steps, result.status.value))
    exponent = fit_exponent([r.n for r in rows], [r.seconds for r in rows])
    if exponent is not None and not math.isfinite(exponent):
        exponent = None
    return BenchReport(rows, exponent)
