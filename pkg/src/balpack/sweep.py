"""Oracle-equivalence sweeps: brute force on the source vs exact search on the reduction."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple

from balpack.exact import solve_kbfbp_decision
from balpack.reductions import (
    PARTITION,
    SUBSET_THIRD,
    TrivialInstance,
    brute_force_partition,
    brute_force_subset_third,
    extract_partition,
    extract_subset_third,
    partition_to_2bfbp,
    subsetsum_to_3bfbp,
)


class CaseResult(NamedTuple):
    source: tuple[int, ...]
    oracle: bool
    solver: bool
    certificate_ok: bool | None  # None when the solver found nothing

    @property
    def agrees(self) -> bool:
        return self.oracle == self.solver and self.certificate_ok is not False


def _reducer(kind: str):
    try:
        return {PARTITION: partition_to_2bfbp, SUBSET_THIRD: subsetsum_to_3bfbp}[kind]
    except KeyError:
        raise ValueError(f"unknown reduction kind {kind!r}") from None


def passes_preconditions(kind: str, values: Sequence[int]) -> bool:
    try:
        _reducer(kind)(values)
    except TrivialInstance:
        return False
    return True


def multisets(max_n: int, max_size: int) -> Iterable[tuple[int, ...]]:
    for n in range(1, max_n + 1):
        yield from itertools.combinations_with_replacement(range(1, max_size + 1), n)


def universe(kind: str, max_n: int, max_size: int) -> list[tuple[int, ...]]:
    """Every multiset (ascending tuples) within the bounds that the reduction accepts."""
    return [a for a in multisets(max_n, max_size) if passes_preconditions(kind, a)]


def check_case(kind: str, values: Sequence[int]) -> CaseResult:
    """Reduce, search, extract, and compare against the brute-force oracle."""
    values = tuple(values)
    reduced = _reducer(kind)(values)
    witness = solve_kbfbp_decision(reduced.instance)
    if kind == PARTITION:
        oracle = brute_force_partition(values) is not None
        cert_ok = None
        if witness is not None:
            a1, a2 = extract_partition(witness, reduced)
            cert_ok = sum(a1) == sum(a2) and sorted(a1 + a2) == sorted(values)
    else:
        oracle = brute_force_subset_third(values) is not None
        cert_ok = None
        if witness is not None:
            sub = extract_subset_third(witness, reduced)
            cert_ok = 3 * sum(sub) == sum(values) and _is_submultiset(sub, values)
    return CaseResult(values, oracle, witness is not None, cert_ok)


def _is_submultiset(sub: Sequence[int], values: Sequence[int]) -> bool:
    pool = list(values)
    for v in sub:
        if v not in pool:
            return False
        pool.remove(v)
    return True


def _check_partition(values):
    return check_case(PARTITION, values)


def _check_subset_third(values):
    return check_case(SUBSET_THIRD, values)


def run_sweep(kind: str, cases: Sequence[Sequence[int]], jobs: int = 1) -> list[CaseResult]:
    """Check every case; results come back in input order whatever ``jobs`` is."""
    fn = _check_partition if kind == PARTITION else _check_subset_third
    _reducer(kind)
    if jobs <= 1:
        return [fn(c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, cases, chunksize=max(1, len(cases) // (4 * jobs))))


def sample_subset_third(count: int, seed: int, max_n: int = 4, max_size: int = 12) -> list[tuple[int, ...]]:
    """``count`` distinct subset-third sources, half yes and half no where possible."""
    pool = universe(SUBSET_THIRD, max_n, max_size)
    yes = [a for a in pool if brute_force_subset_third(a) is not None]
    no = [a for a in pool if brute_force_subset_third(a) is None]
    rng = random.Random(seed)
    n_no = min(len(no), count // 2)
    n_yes = min(len(yes), count - n_no)
    picked = rng.sample(yes, n_yes) + rng.sample(no, min(len(no), count - n_yes))
    return sorted(picked, key=lambda a: (len(a), a))
