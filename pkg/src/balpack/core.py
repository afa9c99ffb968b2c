"""Domain types and exact-arithmetic helpers shared by every solver.

Indexing convention: inside Python, objects and bins are 0-based.  Stages
are ordinal round numbers (1 and 2).  The JSON and LP file formats use
1-based indices throughout; conversion happens in :mod:`balpack.formats`
and :mod:`balpack.mip`.
"""

from __future__ import annotations

import math
import numbers
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np

Rational = Fraction
RationalLike = Union[int, Fraction, str]


class BalpackError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(BalpackError, ValueError):
    pass


class EmptyInstance(InvalidInstance):
    pass


class NonPositiveSize(InvalidInstance):
    pass


class NonPositiveCapacity(InvalidInstance):
    pass


class PreconditionViolated(BalpackError, ValueError):
    pass


class InstanceTooLarge(BalpackError):
    pass


class CapacityTooSmallForObject(BalpackError, ValueError):
    pass


class DimensionMismatch(BalpackError, ValueError):
    pass


class InvariantError(BalpackError, AssertionError):
    """An internal invariant guaranteed by the theory did not hold."""


def as_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to an exact Fraction.

    Floats are rejected: they cannot carry the exactness every check here
    relies on.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: numbers.Rational) -> int | str:
    """Serialize as a bare int when integral, else ``"p/q"`` in lowest terms."""
    q = Fraction(value)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def ceil_div(num: numbers.Rational, den: numbers.Rational) -> int:
    q = Fraction(num) / Fraction(den)
    return -((-q.numerator) // q.denominator)


class RationalArray(Sequence):
    """Read-only sequence of Fractions backed by integer numerators.

    ``denominators`` is either one shared int or a per-element sequence.
    Elements are built on access, which keeps plans for millions of
    objects cheap to produce.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, numerators: Sequence[int], denominators: int | Sequence[int] = 1):
        self._num = numerators
        self._den = denominators

    def __len__(self) -> int:
        return len(self._num)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return tuple(self[i] for i in range(*index.indices(len(self))))
        den = self._den if isinstance(self._den, int) else self._den[index]
        return Fraction(int(self._num[index]), int(den))

    def __eq__(self, other):
        if isinstance(other, (Sequence, RationalArray)) and not isinstance(other, str):
            return len(self) == len(other) and all(a == b for a, b in zip(self, other))
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        if len(self) > 8:
            head = ", ".join(str(v) for v in self[:8])
            return f"RationalArray([{head}, ...] len={len(self)})"
        return f"RationalArray([{', '.join(str(v) for v in self)}])"


class LazyRationals(Sequence):
    """Sequence whose i-th element is ``fn(i)``, computed on access."""

    __slots__ = ("_n", "_fn")

    def __init__(self, length: int, fn: Callable[[int], Fraction]):
        self._n = length
        self._fn = fn

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, index):
        if isinstance(index, slice):
            return tuple(self[i] for i in range(*index.indices(self._n)))
        if index < 0:
            index += self._n
        if not 0 <= index < self._n:
            raise IndexError(index)
        return self._fn(index)

    def __eq__(self, other):
        if isinstance(other, Sequence) and not isinstance(other, str):
            return len(self) == len(other) and all(a == b for a, b in zip(self, other))
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"LazyRationals(len={self._n})"


@dataclass(frozen=True)
class Instance:
    """A validated instance, sizes sorted non-increasing.

    ``order[p]`` is the input index of the object at sorted position ``p``.
    """

    sizes: tuple[int, ...]
    capacity: Fraction
    order: tuple[int, ...]
    bins: int | None = None
    stages: int | None = None
    split_bound: int | None = None

    @property
    def n(self) -> int:
        return len(self.sizes)

    @cached_property
    def total(self) -> int:
        return sum(self.sizes)

    @cached_property
    def input_sizes(self) -> tuple[int, ...]:
        """Sizes in the caller's original order."""
        out = [0] * self.n
        for pos, idx in enumerate(self.order):
            out[idx] = self.sizes[pos]
        return tuple(out)

    def with_params(self, **changes) -> Instance:
        fields = dict(
            sizes=self.sizes,
            capacity=self.capacity,
            order=self.order,
            bins=self.bins,
            stages=self.stages,
            split_bound=self.split_bound,
        )
        fields.update(changes)
        return Instance(**fields)


def _check_count(name: str, value) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidInstance(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def validate_instance(
    raw: Iterable[int],
    capacity: RationalLike,
    *,
    bins: int | None = None,
    stages: int | None = None,
    split_bound: int | None = None,
) -> Instance:
    """Validate raw sizes and capacity and return a sorted :class:`Instance`.

    Ties between equal sizes keep input order (stable sort).
    """
    raw = list(raw)
    if not raw:
        raise EmptyInstance("instance has no objects")
    try:
        cap = as_rational(capacity)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInstance(f"bad capacity {capacity!r}: {exc}") from None
    if cap <= 0:
        raise NonPositiveCapacity(f"capacity must be positive, got {cap}")

    arr = None
    if len(raw) > 64:
        try:
            arr = np.asarray(raw)
        except (OverflowError, ValueError):
            arr = None
        if arr is not None and (arr.ndim != 1 or arr.dtype.kind not in "iu"):
            arr = None
    if arr is not None:
        bad = np.flatnonzero(arr < 1)
        if bad.size:
            i = int(bad[0])
            raise NonPositiveSize(f"size at index {i} is {raw[i]}; sizes must be >= 1")
        order = np.argsort(-arr, kind="stable")
        sizes = tuple(arr[order].tolist())
        order = tuple(order.tolist())
    else:
        for i, v in enumerate(raw):
            if isinstance(v, bool) or not isinstance(v, numbers.Integral):
                raise InvalidInstance(f"size at index {i} is not an integer: {v!r}")
            if v < 1:
                raise NonPositiveSize(f"size at index {i} is {v}; sizes must be >= 1")
        order = tuple(sorted(range(len(raw)), key=lambda i: -raw[i]))
        sizes = tuple(int(raw[i]) for i in order)

    return Instance(
        sizes=sizes,
        capacity=cap,
        order=order,
        bins=_check_count("bins", bins),
        stages=_check_count("stages", stages),
        split_bound=_check_count("split_bound", split_bound),
    )


def lower_bound_bins(instance: Instance) -> int:
    """Trivial fractional lower bound ``ceil(S / C)``, exact."""
    return ceil_div(instance.total, instance.capacity)


@dataclass(frozen=True)
class Packing:
    """Phase-I result: ``boxes[j]`` holds input indices of the objects in box j."""

    boxes: tuple[tuple[int, ...], ...]
    box_sizes: Sequence[numbers.Rational]

    @property
    def m(self) -> int:
        return len(self.boxes)


class Assignment(NamedTuple):
    object: int
    bin: int
    stage: int
    fraction: Fraction


class TwoStagePlan:
    """Two-stage balanced allocation built from a packing and an order.

    Bin ``l`` takes ``lambda1[l]`` of every object of box ``sigma[l]`` in
    stage 1 and ``lambda2[l]`` of every object of box ``sigma[l+1]``
    (cyclically) in stage 2.  ``box_weights`` are the box sums used to
    report bin loads; after inflation they are the original sizes.
    """

    def __init__(
        self,
        sigma: Sequence[int],
        lambda1: Sequence[Fraction],
        lambda2: Sequence[Fraction],
        tilde_c: Fraction,
        packing: Packing,
        box_weights: Sequence[numbers.Rational] | None = None,
        inflation=None,
    ):
        self.sigma = tuple(sigma)
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.tilde_c = tilde_c
        self.packing = packing
        self.box_weights = packing.box_sizes if box_weights is None else box_weights
        self.inflation = inflation

    @property
    def m(self) -> int:
        return len(self.sigma)

    def _load(self, ell: int) -> Fraction:
        nxt = self.sigma[(ell + 1) % self.m]
        return (
            self.lambda1[ell] * self.box_weights[self.sigma[ell]]
            + self.lambda2[ell] * self.box_weights[nxt]
        )

    @cached_property
    def bin_loads(self) -> Sequence[Fraction]:
        return LazyRationals(self.m, self._load)

    def iter_assignments(self) -> Iterator[Assignment]:
        """Yield nonzero (object, bin, stage, fraction) records, bin by bin."""
        boxes = self.packing.boxes
        m = self.m
        for ell in range(m):
            f1 = self.lambda1[ell]
            if f1:
                for obj in boxes[self.sigma[ell]]:
                    yield Assignment(obj, ell, 1, f1)
            f2 = self.lambda2[ell]
            if f2:
                for obj in boxes[self.sigma[(ell + 1) % m]]:
                    yield Assignment(obj, ell, 2, f2)

    @cached_property
    def assignments(self) -> tuple[Assignment, ...]:
        return tuple(self.iter_assignments())

    def __repr__(self) -> str:
        return f"TwoStagePlan(m={self.m}, tilde_c={self.tilde_c})"


@dataclass(frozen=True)
class KbfbpWitness:
    """0/1 incidence rows (input order) plus one proportionality factor per bin."""

    x: tuple[tuple[int, ...], ...]
    alpha: tuple[Fraction, ...]

    @property
    def m(self) -> int:
        return len(self.alpha)

    def permuted(self, perm: Sequence[int]) -> KbfbpWitness:
        """Relabel bins: new bin ``b`` is old bin ``perm[b]``."""
        return KbfbpWitness(
            x=tuple(tuple(row[p] for p in perm) for row in self.x),
            alpha=tuple(self.alpha[p] for p in perm),
        )


def lcm_denominators(values: Iterable[numbers.Rational]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den
