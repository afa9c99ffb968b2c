"""Two-stage balanced multistage bin packing in O(n log n).

Pipeline: optional size inflation, greedy packing of the sorted objects
into ``m = ceil(S/C)`` boxes, then a circular two-stage distribution of the
boxes onto ``m`` bins.  Every bin ends with load exactly ``S/m`` on the
(possibly inflated) sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from balpack import kernels
from balpack.core import (
    Instance,
    InvariantError,
    Packing,
    PreconditionViolated,
    RationalArray,
    TwoStagePlan,
    lcm_denominators,
    lower_bound_bins,
)


@dataclass(frozen=True)
class InflationResult:
    """Sizes raised to ``level`` where smaller, stored over a common denominator.

    ``scaled_sizes[i] / scale == max(a_i, level)`` in sorted order.
    """

    level: Fraction
    raised_count: int
    scale: int
    scaled_sizes: tuple[int, ...]

    @property
    def inflated_sizes(self) -> RationalArray:
        return RationalArray(self.scaled_sizes, self.scale)

    @property
    def total(self) -> Fraction:
        return Fraction(sum(self.scaled_sizes), self.scale)


def _check_theorem_hypothesis(instance: Instance, m: int) -> None:
    if m > instance.n:
        raise PreconditionViolated(
            f"m = {m} bins exceeds n = {instance.n} objects; two stages cannot cover this case"
        )
    spread = instance.sizes[0] - instance.sizes[-1]
    if spread > instance.capacity:
        raise PreconditionViolated(
            f"size spread a_1 - a_n = {spread} exceeds capacity {instance.capacity}"
        )


def inflate_sizes(instance: Instance, m: int) -> InflationResult:
    """Raise the smallest sizes to a common level until the spread fits the average.

    When ``a_1 - a_n > S/m`` the level ``L`` solves
    ``a_1 - L = (1/m) * sum(max(a_i, L))``.  The right-hand side is
    piecewise linear in ``L``, so scanning the number ``t`` of raised
    objects gives ``L = (m*a_1 - R_t) / (m + t)`` with ``R_t`` the sum of the
    ``n - t`` largest sizes; the first ``t`` whose ``L`` lies between the
    t-th and (t+1)-th smallest sizes is the answer.
    """
    _check_theorem_hypothesis(instance, m)
    sizes = instance.sizes
    n = len(sizes)
    a1, an = sizes[0], sizes[-1]
    total = instance.total
    if m * (a1 - an) <= total:
        return InflationResult(Fraction(an), 0, 1, sizes)

    rest = total
    level = None
    for t in range(1, n):
        rest -= sizes[n - t]
        cand = Fraction(m * a1 - rest, m + t)
        if sizes[n - t] <= cand <= sizes[n - t - 1]:
            level = cand
            break
    if level is None:  # g(a_n) < 0 < g(a_1) forces a root in some segment
        raise InvariantError("no inflation level found")

    p, q = level.numerator, level.denominator
    scaled = tuple(a * q if a * q > p else p for a in sizes)
    raised = sum(1 for a in sizes if a * q < p)
    return InflationResult(level, raised, q, scaled)


def _group(box_of: list[int], order: tuple[int, ...], m: int) -> tuple[tuple[int, ...], ...]:
    groups: list[list[int]] = [[] for _ in range(m)]
    for pos, j in enumerate(box_of):
        groups[j].append(order[pos])
    return tuple(map(tuple, groups))


def pack_phase1(instance: Instance, m: int, *, backend: str | None = None) -> Packing:
    """Greedy packing: each object, largest first, goes to the lightest box.

    Ties between equally light boxes go to the smallest box index.
    """
    if m < 1:
        raise ValueError("m must be positive")
    box_of, loads = kernels.pack_boxes(list(instance.sizes), m, backend=backend)
    return Packing(_group(box_of, instance.order, m), RationalArray(loads, 1))


def _distribute_scaled(
    scaled: list[int],
    scale: int,
    packing: Packing,
    box_weights,
    inflation,
    backend,
) -> TwoStagePlan:
    m = len(scaled)
    total = sum(scaled)
    if m * (max(scaled) - min(scaled)) > total:
        raise PreconditionViolated("box size spread C_max - C_min exceeds the average box size")
    out = kernels.distribute(scaled, backend=backend)
    if out is None:
        raise InvariantError("distribution ran out of candidate boxes")
    sigma, num1, den1 = out
    nxt = num1[1:] + num1[:1]
    dnxt = den1[1:] + den1[:1]
    num2 = [d - v for d, v in zip(dnxt, nxt)]
    return TwoStagePlan(
        sigma=sigma,
        lambda1=RationalArray(num1, den1),
        lambda2=RationalArray(num2, dnxt),
        tilde_c=Fraction(total, m * scale),
        packing=packing,
        box_weights=box_weights,
        inflation=inflation,
    )


def distribute_phase2(
    packing: Packing, tilde_c: Fraction, *, backend: str | None = None
) -> TwoStagePlan:
    """Spread the boxes over ``m`` bins in two balanced stages.

    The first box is the smallest one at or above the average ``tilde_c``.
    With ``S_1 = C_sigma(1) + C~ - C_max`` and ``S_l = S_{l-1} + C_sigma(l)``,
    while ``S_{l-1} <= l*C~ - C_max`` the next box is the smallest remaining one at or above the average,
    otherwise the largest remaining one at or below it.  Equal sizes are
    taken in box-index order.
    """
    m = packing.m
    sizes = list(packing.box_sizes)
    tilde_c = Fraction(tilde_c)
    if sum(sizes) != m * tilde_c:
        raise PreconditionViolated("box sizes do not sum to m * tilde_c")
    if max(sizes) - min(sizes) > tilde_c:
        raise PreconditionViolated("box size spread C_max - C_min exceeds tilde_c")
    scale = lcm_denominators(sizes)
    scaled = [int(c * scale) for c in sizes]
    return _distribute_scaled(scaled, scale, packing, None, None, backend)


def solve_bmbp(instance: Instance, *, backend: str | None = None) -> TwoStagePlan:
    """Optimal two-stage allocation of all objects into ``ceil(S/C)`` bins.

    Requires ``a_1 - a_n <= C`` and ``ceil(S/C) <= n``.  When sizes had to
    be inflated, the plan keeps the fractions computed on the inflated
    sizes and reports bin loads on the original ones (each at most ``C``).
    """
    m = lower_bound_bins(instance)
    infl = inflate_sizes(instance, m)
    scaled = list(infl.scaled_sizes)
    box_of, loads = kernels.pack_boxes(scaled, m, backend=backend)
    packing = Packing(_group(box_of, instance.order, m), RationalArray(loads, infl.scale))
    if infl.raised_count:
        weights = [0] * m
        for a, j in zip(instance.sizes, box_of):
            weights[j] += a
        box_weights = RationalArray(weights, 1)
    else:
        box_weights = RationalArray(loads, infl.scale)
    total = sum(loads)
    if m * (max(loads) - min(loads)) > total:
        raise InvariantError("packing left C_max - C_min above the average box size")
    return _distribute_scaled(loads, infl.scale, packing, box_weights, infl, backend)

