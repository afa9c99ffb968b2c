"""Hardness reductions to 2- and 3-BFBP, certificate extraction, and oracles.

Partition (equal-sum split of A) maps to 2-BFBP on three bins by adding two
copies of ``S/2 + 4 - r`` (``r = S mod 3``) with capacity ``2(S+4-r)/3``.
Subset-sum-third (a subset of A summing to S/3) maps to 3-BFBP on four bins
by adding three copies of ``2S/3 + r + 1`` (``r = S mod 2``) with capacity
``3(S+r+1)/4``.  In both, every bin must be exactly full and the integrality
of the sizes forces the bin factors, which is what extraction relies on.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from balpack.core import BalpackError, Instance, InstanceTooLarge, KbfbpWitness, validate_instance
from balpack.verifier import check_kbfbp

ORACLE_MAX_N = 24

PARTITION = "partition"
SUBSET_THIRD = "subset_third"


class TrivialInstance(BalpackError, ValueError):
    """The source instance is outside the reduction's domain; answer it directly."""


class MalformedWitness(BalpackError, ValueError):
    pass


class SumNotDivisible(BalpackError, ValueError):
    pass


@dataclass(frozen=True)
class ReducedInstance:
    instance: Instance
    source_kind: str
    pad_value: int
    pad_count: int
    residue: int

    @property
    def source(self) -> tuple[int, ...]:
        """The original multiset A (pads are the trailing input objects)."""
        return self.instance.input_sizes[: self.instance.n - self.pad_count]

    @property
    def split_bound(self) -> int:
        return self.instance.split_bound


def _as_multiset(values: Sequence[int]) -> list[int]:
    out = list(values)
    if not out or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in out):
        raise TrivialInstance("source must be a nonempty list of positive integers")
    return out


def partition_to_2bfbp(values: Sequence[int]) -> ReducedInstance:
    a = _as_multiset(values)
    s = sum(a)
    if s % 2 or max(a) > s // 2 or s <= 8:
        raise TrivialInstance(f"partition instance with S={s}, max={max(a)} is trivial (need S even, max <= S/2, S > 8)")
    r = s % 3
    pad = s // 2 + 4 - r
    inst = validate_instance(a + [pad, pad], Fraction(2 * (s + 4 - r), 3), bins=3, split_bound=2)
    return ReducedInstance(inst, PARTITION, pad, 2, r)


def subsetsum_to_3bfbp(values: Sequence[int]) -> ReducedInstance:
    a = _as_multiset(values)
    s = sum(a)
    if s % 3 or 3 * max(a) > 2 * s or s <= 3:
        raise TrivialInstance(f"subset-third instance with S={s}, max={max(a)} is trivial (need 3 | S, max <= 2S/3, S > 3)")
    r = s % 2
    pad = 2 * s // 3 + r + 1
    inst = validate_instance(a + [pad] * 3, Fraction(3 * (s + r + 1), 4), bins=4, split_bound=3)
    return ReducedInstance(inst, SUBSET_THIRD, pad, 3, r)


def reduced_from_parts(instance: Instance, kind: str, pad_value: int, pad_count: int, residue: int) -> ReducedInstance:
    """Rebuild a ReducedInstance read back from disk, checking it is consistent."""
    red = ReducedInstance(instance, kind, pad_value, pad_count, residue)
    expect = {PARTITION: partition_to_2bfbp, SUBSET_THIRD: subsetsum_to_3bfbp}.get(kind)
    if expect is None:
        raise ValueError(f"unknown reduction kind {kind!r}")
    fresh = expect(list(red.source))
    if (fresh.instance.sizes, fresh.instance.capacity, fresh.pad_value, fresh.residue) != (
        instance.sizes, instance.capacity, pad_value, residue
    ):
        raise ValueError("reduction metadata does not match the instance")
    return red


def _require_valid(witness: KbfbpWitness, reduced: ReducedInstance) -> None:
    report = check_kbfbp(reduced.instance, witness, reduced.split_bound)
    if not report.ok:
        first = report.violations[0]
        raise MalformedWitness(f"witness fails verification ({first.constraint} at {first.subject})")


def extract_partition(witness: KbfbpWitness, reduced: ReducedInstance) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (A1, A2) of equal sum from a 2-BFBP witness.

    The two bins with factor 2/3 each hold one pad plus one side of the
    partition; the 1/3 bin holds a third of everything.
    """
    if reduced.source_kind != PARTITION:
        raise ValueError("not a partition reduction")
    if sorted(witness.alpha) != [Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)]:
        raise MalformedWitness(f"bin factors {[str(a) for a in witness.alpha]} are not {{2/3, 2/3, 1/3}}")
    _require_valid(witness, reduced)
    b1, b2 = [j for j, a in enumerate(witness.alpha) if a == Fraction(2, 3)]
    source = reduced.source
    side1 = tuple(v for i, v in enumerate(source) if witness.x[i][b1])
    side2 = tuple(v for i, v in enumerate(source) if witness.x[i][b2])
    if len(side1) + len(side2) != len(source) or 2 * sum(side1) != sum(source) or sum(side1) != sum(side2):
        raise MalformedWitness("2/3 bins do not split the source into equal halves")
    return side1, side2


def extract_subset_third(witness: KbfbpWitness, reduced: ReducedInstance) -> tuple[int, ...]:
    """Recover a subset of A with sum S/3 from a 3-BFBP witness.

    Some bin's allocated set, or its complement, sums to S'/3 and contains
    exactly one pad; dropping the pad leaves the certificate.
    """
    if reduced.source_kind != SUBSET_THIRD:
        raise ValueError("not a subset-third reduction")
    _require_valid(witness, reduced)
    sizes = reduced.instance.input_sizes
    n_src = len(sizes) - reduced.pad_count
    target = sum(sizes) // 3
    for b in range(witness.m):
        inside = [i for i in range(len(sizes)) if witness.x[i][b] and witness.alpha[b] != 0]
        outside = sorted(set(range(len(sizes))) - set(inside))
        for members in (inside, outside):
            if sum(sizes[i] for i in members) != target:
                continue
            pads = sum(1 for i in members if i >= n_src)
            if pads != 1:
                raise MalformedWitness(f"candidate set holds {pads} pads, expected exactly 1")
            return tuple(sizes[i] for i in members if i < n_src)
    raise MalformedWitness("no bin set or complement sums to S'/3")


def _first_subset(values: Sequence[int], target: int) -> tuple[int, ...] | None:
    """Lexicographically first index tuple (increasing) whose values sum to ``target``."""
    n = len(values)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + values[i]
    dead: set[tuple[int, int]] = set()
    picked: list[int] = []

    def walk(start: int, need: int) -> bool:
        if need == 0:
            return True
        if need < 0 or suffix[start] < need or (start, need) in dead:
            return False
        for i in range(start, n):
            picked.append(i)
            if walk(i + 1, need - values[i]):
                return True
            picked.pop()
        dead.add((start, need))
        return False

    return tuple(picked) if walk(0, target) else None


def _oracle_guard(values: Sequence[int]) -> list[int]:
    values = list(values)
    if len(values) > ORACLE_MAX_N:
        raise InstanceTooLarge(f"brute-force oracles limited to n <= {ORACLE_MAX_N}")
    return values


def brute_force_partition(values: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Equal-sum split of the multiset; A1 is the lexicographically first index set."""
    values = _oracle_guard(values)
    s = sum(values)
    if s % 2 or not values:
        return None
    idx = _first_subset(values, s // 2)
    if idx is None:
        return None
    chosen = set(idx)
    return (
        tuple(values[i] for i in idx),
        tuple(v for i, v in enumerate(values) if i not in chosen),
    )


def brute_force_subset_third(values: Sequence[int]) -> tuple[int, ...] | None:
    """First subset (by index tuple) summing to a third of the total."""
    values = _oracle_guard(values)
    s = sum(values)
    if s % 3:
        raise SumNotDivisible(f"total {s} is not divisible by 3")
    idx = _first_subset(values, s // 3)
    return None if idx is None else tuple(values[i] for i in idx)
