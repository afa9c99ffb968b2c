"""Exact feasibility of small linear systems over the rationals.

Equalities are removed by Gauss-Jordan elimination, the remaining
inequalities over the free variables by Fourier-Motzkin.  Intended for a
handful of variables; the constraint count can grow quadratically per
eliminated variable.

A constraint ``(coeffs, rhs)`` means ``sum(c * x) <= rhs`` for inequalities
and ``sum(c * x) == rhs`` for equalities.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

Row = tuple[tuple[Fraction, ...], Fraction]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class AffineSolution:
    """Solution set of an equality system: ``x = base + basis @ t``.

    ``free`` lists the variables that act as parameters ``t``; for those,
    ``base`` is 0 and ``basis`` is the unit vector.
    """

    n: int
    free: tuple[int, ...]
    base: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]  # basis[var][k] for free var k

    def point(self, params: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            self.base[v] + sum((c * t for c, t in zip(self.basis[v], params)), _ZERO)
            for v in range(self.n)
        )


def solve_equalities(n: int, equalities: Sequence[Row]) -> AffineSolution | None:
    """Gauss-Jordan elimination; ``None`` when the system is inconsistent."""
    rows = [list(map(Fraction, c)) + [Fraction(r)] for c, r in equalities]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if row[n] != 0:
            return None

    free = tuple(c for c in range(n) if c not in pivots)
    base = [_ZERO] * n
    basis = [[_ZERO] * len(free) for _ in range(n)]
    for k, f in enumerate(free):
        basis[f][k] = Fraction(1)
    for i, col in enumerate(pivots):
        base[col] = rows[i][n]
        for k, f in enumerate(free):
            basis[col][k] = -rows[i][f]
    return AffineSolution(n, free, tuple(base), tuple(map(tuple, basis)))


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction) -> Row:
    lead = next((abs(c) for c in coeffs if c != 0), None)
    if lead is None or lead == 1:
        return coeffs, rhs
    return tuple(c / lead for c in coeffs), rhs / lead


def fourier_motzkin(n: int, inequalities: Sequence[Row]) -> tuple[Fraction, ...] | None:
    """Return a point satisfying every ``a.x <= b``, or ``None``.

    Variables are eliminated from last to first.  Back-substitution takes the
    midpoint of each variable's admissible interval (or its finite end, or 0
    when unbounded), so the returned point is deterministic.
    """
    current = {_normalize(tuple(map(Fraction, c)), Fraction(b)) for c, b in inequalities}
    stages: list[list[Row]] = []
    for v in range(n - 1, -1, -1):
        stage = sorted(current)
        stages.append(stage)
        pos = [row for row in stage if row[0][v] > 0]
        neg = [row for row in stage if row[0][v] < 0]
        nxt = {row for row in stage if row[0][v] == 0}
        for pc, pb in pos:
            sp = pc[v]
            for nc, nb in neg:
                sn = -nc[v]
                coeffs = tuple(a / sp + b / sn for a, b in zip(pc, nc))
                nxt.add(_normalize(coeffs, pb / sp + nb / sn))
        current = set()
        for coeffs, rhs in nxt:
            if all(c == 0 for c in coeffs):
                if rhs < 0:
                    return None
            else:
                current.add((coeffs, rhs))
    for _, rhs in current:  # only constant rows can remain
        if rhs < 0:
            return None

    x = [_ZERO] * n
    for v, stage in zip(range(n), reversed(stages)):
        lo = hi = None
        for coeffs, rhs in stage:
            c = coeffs[v]
            if c == 0:
                continue
            rest = rhs - sum((coeffs[u] * x[u] for u in range(v)), _ZERO)
            bound = rest / c
            if c > 0:
                hi = bound if hi is None or bound < hi else hi
            else:
                lo = bound if lo is None or bound > lo else lo
        if lo is not None and hi is not None:
            x[v] = (lo + hi) / 2
        elif lo is not None:
            x[v] = lo
        elif hi is not None:
            x[v] = hi
    return tuple(x)


def find_point(
    n: int, equalities: Sequence[Row], inequalities: Sequence[Row]
) -> tuple[Fraction, ...] | None:
    """Exact feasibility of ``{x : E x = e, A x <= b}`` with a witness point."""
    aff = solve_equalities(n, equalities)
    if aff is None:
        return None
    return point_in(aff, inequalities)


def point_in(aff: AffineSolution, inequalities: Sequence[Row]) -> tuple[Fraction, ...] | None:
    """Restrict inequalities to an affine solution set and solve over its parameters."""
    k = len(aff.free)
    reduced = []
    for coeffs, rhs in inequalities:
        const = rhs - sum((c * b for c, b in zip(coeffs, aff.base)), _ZERO)
        red = tuple(
            sum((coeffs[v] * aff.basis[v][t] for v in range(aff.n) if coeffs[v]), _ZERO)
            for t in range(k)
        )
        reduced.append((red, const))
    params = fourier_motzkin(k, reduced)
    if params is None:
        return None
    return aff.point(params)


def point_in_box(aff: AffineSolution, upper: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Point of the affine set with ``0 <= x_v <= upper[v]`` for every variable.

    Same answer as :func:`point_in` on the explicit bound rows, with direct
    interval arithmetic when at most one parameter is free.
    """
    k = len(aff.free)
    if k == 0:
        ok = all(0 <= b <= u for b, u in zip(aff.base, upper))
        return aff.base if ok else None
    if k == 1:
        lo = hi = None
        for b, row, u in zip(aff.base, aff.basis, upper):
            c = row[0]
            if c == 0:
                if not 0 <= b <= u:
                    return None
                continue
            # 0 <= b + c t <= u
            ends = (-b / c, (u - b) / c)
            low, high = (ends if c > 0 else ends[::-1])
            lo = low if lo is None or low > lo else lo
            hi = high if hi is None or high < hi else hi
        if lo is not None and hi is not None and lo > hi:
            return None
        if lo is not None and hi is not None:
            t = (lo + hi) / 2
        else:
            t = lo if lo is not None else (hi if hi is not None else _ZERO)
        return aff.point((t,))
    rows = []
    for v in range(aff.n):
        unit = tuple(Fraction(1 if u == v else 0) for u in range(aff.n))
        rows.append((unit, upper[v]))
        rows.append((tuple(-c for c in unit), _ZERO))
    return point_in(aff, rows)
