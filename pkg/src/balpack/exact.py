"""Exact decision procedure for k-balanced fractional bin packing.

An allocation is a 0/1 split pattern ``x`` (which bins each object touches)
plus one factor ``alpha_j`` per bin.  For a fixed pattern the factors must
satisfy ``sum_{j in row} alpha_j = 1`` for every row and
``0 <= alpha_j <= min(1, C / s_j)`` with ``s_j`` the total size touching bin
``j``; that system is decided exactly in :mod:`balpack.linear`.

The search walks patterns in enumeration order (objects largest first, row
choices by cardinality then lexicographically).  Adding an object only adds
equalities and raises the ``s_j``, so an infeasible partial pattern can be
cut, and failed states ``(object, distinct rows, loads)`` are memoized.  The
first witness found is therefore the first one plain enumeration would
reach.
"""

from __future__ import annotations

import itertools
import math
import sys
from collections.abc import Iterator
from fractions import Fraction

from balpack.core import (
    CapacityTooSmallForObject,
    Instance,
    InstanceTooLarge,
    InvalidInstance,
    KbfbpWitness,
)
from balpack.linear import AffineSolution, point_in_box, solve_equalities

PATTERN_LIMIT = 10**8
BINPACKING_MAX_N = 20

SplitPattern = tuple[tuple[int, ...], ...]


def row_choices(m: int, k: int) -> list[tuple[int, ...]]:
    """Nonempty bin subsets of size <= k, by cardinality then lexicographically."""
    out = []
    for size in range(1, min(k, m) + 1):
        out.extend(itertools.combinations(range(m), size))
    return out


def _new_bins_ok(row: tuple[int, ...], touched: int) -> int | None:
    """Canonical bin order: untouched bins must be claimed lowest index first.

    Returns the new touched count, or ``None`` if the row is not canonical.
    """
    fresh = [b for b in row if b >= touched]
    if fresh != list(range(touched, touched + len(fresh))):
        return None
    return touched + len(fresh)


def pattern_count(n: int, m: int, k: int, prune_symmetry: bool = False) -> int:
    """Number of patterns :func:`enumerate_patterns` would yield."""
    if not prune_symmetry:
        per_row = sum(math.comb(m, t) for t in range(1, min(k, m) + 1))
        return per_row**n
    ways = [0] * (m + 1)
    ways[0] = 1
    for _ in range(n):
        nxt = [0] * (m + 1)
        for t, w in enumerate(ways):
            if not w:
                continue
            for u in range(0, m - t + 1):
                mult = sum(math.comb(t, i) for i in range(0, t + 1) if 1 <= i + u <= k)
                if mult:
                    nxt[t + u] += w * mult
        ways = nxt
    return sum(ways)


def _guard(n: int, m: int, k: int, prune_symmetry: bool, limit: int) -> None:
    count = pattern_count(n, m, k, prune_symmetry)
    if count > limit:
        raise InstanceTooLarge(
            f"{count} split patterns for n={n}, m={m}, k={k} exceeds the limit {limit}"
        )


def enumerate_patterns(
    n: int, m: int, k: int, *, prune_symmetry: bool = False, limit: int = PATTERN_LIMIT
) -> Iterator[SplitPattern]:
    """Yield every n x m 0/1 matrix whose rows touch between 1 and k bins.

    With ``prune_symmetry`` bins must be first used in index order, which
    keeps at least one pattern of every bin-relabeling class and drops
    most of the copies.
    """
    if n < 1 or m < 1 or k < 1:
        raise ValueError("n, m and k must be positive")
    _guard(n, m, k, prune_symmetry, limit)
    rows = [tuple(1 if b in choice else 0 for b in range(m)) for choice in row_choices(m, k)]
    choices = row_choices(m, k)
    if not prune_symmetry:
        yield from itertools.product(rows, repeat=n)
        return

    prefix: list[tuple[int, ...]] = []

    def walk(i: int, touched: int) -> Iterator[SplitPattern]:
        if i == n:
            yield tuple(prefix)
            return
        for choice, row in zip(choices, rows):
            t = _new_bins_ok(choice, touched)
            if t is None:
                continue
            prefix.append(row)
            yield from walk(i + 1, t)
            prefix.pop()

    yield from walk(0, 0)


def _upper_bounds(loads, capacity: Fraction) -> list[Fraction]:
    return [Fraction(1) if s == 0 else min(Fraction(1), capacity / s) for s in loads]


def _row_equalities(rows, m: int):
    return [(tuple(Fraction(v) for v in row), Fraction(1)) for row in rows]


def feasible_alpha(pattern: SplitPattern, instance: Instance) -> tuple[Fraction, ...] | None:
    """Proportionality factors making ``pattern`` a valid allocation, if any.

    ``pattern`` rows follow the instance's input order.
    """
    sizes = instance.input_sizes
    if len(pattern) != len(sizes):
        raise ValueError(f"pattern has {len(pattern)} rows for {len(sizes)} objects")
    m = len(pattern[0])
    if any(len(row) != m for row in pattern):
        raise ValueError("ragged pattern")
    loads = [sum(a for a, row in zip(sizes, pattern) if row[j]) for j in range(m)]
    aff = solve_equalities(m, _row_equalities(sorted(set(pattern)), m))
    if aff is None:
        return None
    return point_in_box(aff, _upper_bounds(loads, instance.capacity))


class _Search:
    def __init__(self, sizes, capacity: Fraction, m: int, k: int, prune_symmetry: bool):
        self.sizes = sizes
        self.capacity = capacity
        self.m = m
        self.choices = row_choices(m, k)
        self.rows = [tuple(1 if b in c else 0 for b in range(m)) for c in self.choices]
        self.prune = prune_symmetry
        self._spaces: dict[int, AffineSolution | None] = {}
        self._alpha: dict[tuple, tuple[Fraction, ...] | None] = {}
        self._dead: set[tuple] = set()
        self.picked: list[int] = []

    def space(self, used: int) -> AffineSolution | None:
        if used not in self._spaces:
            rows = [self.rows[c] for c in range(len(self.rows)) if used >> c & 1]
            self._spaces[used] = solve_equalities(self.m, _row_equalities(rows, self.m))
        return self._spaces[used]

    def alpha(self, used: int, loads: tuple[int, ...]):
        key = (used, loads)
        if key not in self._alpha:
            aff = self.space(used)
            if aff is None:
                self._alpha[key] = None
            else:
                self._alpha[key] = point_in_box(aff, _upper_bounds(loads, self.capacity))
        return self._alpha[key]

    def run(self, i: int, used: int, loads: tuple[int, ...], touched: int):
        if i == len(self.sizes):
            return self.alpha(used, loads)
        key = (i, used, loads)
        if key in self._dead:
            return None
        a = self.sizes[i]
        for c, choice in enumerate(self.choices):
            t = touched
            if self.prune:
                t = _new_bins_ok(choice, touched)
                if t is None:
                    continue
            nl = list(loads)
            for b in choice:
                nl[b] += a
            nl = tuple(nl)
            nused = used | (1 << c)
            if self.alpha(nused, nl) is None:
                continue
            self.picked.append(c)
            found = self.run(i + 1, nused, nl, t)
            if found is not None:
                return found
            self.picked.pop()
        self._dead.add(key)
        return None


def _canonical_witness(rows: list[tuple[int, ...]], alpha: tuple[Fraction, ...]) -> KbfbpWitness:
    keep = [a != 0 for a in alpha]
    x = tuple(tuple(v if keep[j] else 0 for j, v in enumerate(row)) for row in rows)
    return KbfbpWitness(x=x, alpha=tuple(alpha))


def solve_kbfbp_decision(
    instance: Instance,
    m: int | None = None,
    k: int | None = None,
    *,
    prune_symmetry: bool = True,
    limit: int = PATTERN_LIMIT,
) -> KbfbpWitness | None:
    """Decide k-BFBP(A, C, m); return the first witness in enumeration order.

    ``m`` and ``k`` default to the instance's ``bins`` and ``split_bound``.
    Bins whose factor comes out 0 are cleared from ``x``: they receive
    nothing.  The size guard counts the patterns of the active enumeration
    mode (with or without bin-symmetry pruning).
    """
    m = instance.bins if m is None else m
    k = instance.split_bound if k is None else k
    if m is None or k is None:
        raise InvalidInstance("k-BFBP needs both a bin count and a split bound")
    if m < 1 or k < 1:
        raise InvalidInstance("bin count and split bound must be positive")
    if instance.sizes[0] > instance.capacity:
        raise CapacityTooSmallForObject(
            f"object of size {instance.sizes[0]} exceeds capacity {instance.capacity}"
        )
    _guard(instance.n, m, k, prune_symmetry, limit)

    search = _Search(instance.sizes, instance.capacity, m, k, prune_symmetry)
    old = sys.getrecursionlimit()
    if instance.n + 100 > old:
        sys.setrecursionlimit(instance.n + 100)
    try:
        alpha = search.run(0, 0, (0,) * m, 0)
    finally:
        sys.setrecursionlimit(old)
    if alpha is None:
        return None
    rows: list[tuple[int, ...]] = [()] * instance.n
    for pos, c in enumerate(search.picked):
        rows[instance.order[pos]] = search.rows[c]
    return _canonical_witness(rows, alpha)


def binpacking_assignment(instance: Instance, m: int) -> tuple[int, ...] | None:
    """Bin index per object (input order) for an unsplit packing into ``m`` bins."""
    if instance.n > BINPACKING_MAX_N:
        raise InstanceTooLarge(f"exhaustive bin packing limited to n <= {BINPACKING_MAX_N}")
    sizes = instance.sizes
    cap = instance.capacity
    loads = [0] * m
    where = [0] * len(sizes)

    def place(i: int) -> bool:
        if i == len(sizes):
            return True
        seen = set()
        for j in range(m):
            if loads[j] in seen or loads[j] + sizes[i] > cap:
                continue
            seen.add(loads[j])
            loads[j] += sizes[i]
            where[i] = j
            if place(i + 1):
                return True
            loads[j] -= sizes[i]
        return False

    if sum(sizes) > m * cap or not place(0):
        return None
    out = [0] * len(sizes)
    for pos, j in enumerate(where):
        out[instance.order[pos]] = j
    return tuple(out)


def brute_force_binpacking(instance: Instance, m: int) -> bool:
    """Classical (unsplit) bin packing into ``m`` bins, by exhaustive search.

    Bins holding equal load are interchangeable, so only the first of them
    is tried at each level.
    """
    return binpacking_assignment(instance, m) is not None
