"""Exact constraint checks for k-BFBP witnesses and multistage plans.

Constraint ids match the row families of the exported MIP models:
``cap`` (capacity), ``dem`` (demand), ``split`` (split bound), ``onebin``
(one bin per object and stage), ``balance`` (equal share per bin and
stage), ``bound`` (values outside [0, 1]), ``binary`` (non 0/1 incidence),
``stage`` (stage label out of range).
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from balpack.core import Assignment, DimensionMismatch, Instance, KbfbpWitness, TwoStagePlan

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Violation(NamedTuple):
    constraint: str
    subject: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def families(self) -> set[str]:
        return {v.constraint for v in self.violations}


def check_kbfbp(instance: Instance, witness: KbfbpWitness, k: int) -> VerificationReport:
    """Check capacity, demand, balance and split bound with ``lambda_ij = alpha_j x_ij``.

    Every bin counts as available; an empty bin is simply unused.
    """
    sizes = instance.input_sizes
    alpha = tuple(Fraction(a) for a in witness.alpha)
    m = len(alpha)
    if len(witness.x) != len(sizes):
        raise DimensionMismatch(f"witness has {len(witness.x)} rows, instance has {len(sizes)} objects")
    if any(len(row) != m for row in witness.x):
        raise DimensionMismatch(f"every row of x must have {m} entries")

    out: list[Violation] = []
    for j, a in enumerate(alpha):
        if a < 0:
            out.append(Violation("bound", (j,), a, _ZERO))
        elif a > 1:
            out.append(Violation("bound", (j,), a, _ONE))
    for i, row in enumerate(witness.x):
        for j, v in enumerate(row):
            if v not in (0, 1):
                out.append(Violation("binary", (i, j), Fraction(v), _ONE))
        touched = sum(row)
        if touched > k:
            out.append(Violation("split", (i,), Fraction(touched), Fraction(k)))
        demand = sum((alpha[j] * v for j, v in enumerate(row)), _ZERO)
        if demand != 1:
            out.append(Violation("dem", (i,), demand, _ONE))
    for j in range(m):
        load = sum((a * row[j] for a, row in zip(sizes, witness.x)), _ZERO) * alpha[j]
        if load > instance.capacity:
            out.append(Violation("cap", (j,), load, instance.capacity))
    return VerificationReport(tuple(out))


def check_bmbp(
    instance: Instance,
    plan: TwoStagePlan | Iterable[Assignment],
    stages: int = 2,
    bins: int | None = None,
) -> VerificationReport:
    """Check a multistage allocation given as fraction records.

    Bin factors are inferred from the fractions themselves: within one
    (bin, stage) every nonzero share must equal the share of the
    lowest-numbered object there.  Records repeating an (object, bin,
    stage) key are summed.
    """
    sizes = instance.input_sizes
    n = len(sizes)
    if isinstance(plan, TwoStagePlan):
        records: Iterable[Assignment] = plan.iter_assignments()
        bins = plan.m if bins is None else bins
    else:
        records = list(plan)
        if bins is None:
            bins = instance.bins if instance.bins is not None else 1 + max((r[1] for r in records), default=-1)

    out: list[Violation] = []
    share: dict[tuple[int, int, int], Fraction] = defaultdict(Fraction)
    for rec in records:
        obj, b, stage, frac = rec
        if not 0 <= obj < n:
            raise DimensionMismatch(f"object {obj} out of range for {n} objects")
        if not 0 <= b < bins:
            raise DimensionMismatch(f"bin {b} out of range for {bins} bins")
        if not 1 <= stage <= stages:
            out.append(Violation("stage", (obj, b, stage), Fraction(stage), Fraction(stages)))
            continue
        share[obj, b, stage] += Fraction(frac)

    demand = [_ZERO] * n
    per_stage: dict[tuple[int, int], int] = defaultdict(int)
    groups: dict[tuple[int, int], list[tuple[int, Fraction]]] = defaultdict(list)
    loads = [_ZERO] * bins
    for (obj, b, stage), f in sorted(share.items()):
        if f < 0 or f > 1:
            out.append(Violation("bound", (obj, b, stage), f, _ZERO if f < 0 else _ONE))
        demand[obj] += f
        loads[b] += sizes[obj] * f
        if f != 0:
            per_stage[obj, stage] += 1
            groups[b, stage].append((obj, f))

    for obj, total in enumerate(demand):
        if total != 1:
            out.append(Violation("dem", (obj,), total, _ONE))
    for (obj, stage), count in sorted(per_stage.items()):
        if count > 1:
            out.append(Violation("onebin", (obj, stage), Fraction(count), _ONE))
    for (b, stage), members in sorted(groups.items()):
        ref = members[0][1]
        for obj, f in members[1:]:
            if f != ref:
                out.append(Violation("balance", (obj, b, stage), f, ref))
    for b, load in enumerate(loads):
        if load > instance.capacity:
            out.append(Violation("cap", (b,), load, instance.capacity))
    return VerificationReport(tuple(out))
