"""Random instances inside the two-stage hypothesis, and solver timing."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from balpack.bmbp import solve_bmbp
from balpack.core import Instance, validate_instance


def random_instance(n: int, seed: int, *, base: int = 1, capacity: int = 100) -> Instance:
    """``n`` sizes drawn uniformly from ``[base, base + capacity]``.

    The spread of such sizes never exceeds the capacity.  Whether the bin
    count stays <= n depends on ``base``; keep it below about capacity/2.
    """
    if n < 1 or base < 1 or capacity < 1:
        raise ValueError("n, base and capacity must be positive")
    rng = np.random.default_rng(seed)
    sizes = rng.integers(base, base + capacity, size=n, endpoint=True, dtype=np.int64)
    return validate_instance(sizes.tolist(), capacity)


@dataclass(frozen=True)
class Timing:
    n: int
    bins: int
    inflated: bool
    backend: str
    seconds: float


def time_solve(instance: Instance, *, backend: str | None = None, repeat: int = 1) -> Timing:
    """Best wall time of ``repeat`` runs of the two-stage solver."""
    from balpack.kernels import BACKEND

    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        plan = solve_bmbp(instance, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return Timing(instance.n, plan.m, bool(plan.inflation and plan.inflation.raised_count), backend or BACKEND, best)
