"""LP-format export of the bin packing MIP models, plus a grammar checker.

Models: ``classic_bp`` (unsplit packing), ``bfbp`` (balanced fractional,
with the product ``lambda = alpha * x`` linearized), ``kbfbp`` (bfbp plus a
split bound, bins fixed), ``bmbp`` (multistage balanced).  Names are
1-based in input order: ``x_i_j``, ``l_i_j``, ``a_j``, ``y_j`` with a ``_s``
stage suffix for bmbp.  Capacity rows are multiplied through by the
capacity's denominator so every coefficient in the file is an integer.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from balpack.core import BalpackError, Instance

KINDS = ("classic_bp", "bfbp", "kbfbp", "bmbp")


class UnsupportedKindParameter(BalpackError, ValueError):
    pass


class LpFormatError(BalpackError, ValueError):
    pass


@dataclass(frozen=True)
class ModelKind:
    """Which model to emit and its parameters.

    ``bins`` defaults to the instance's bin count, else ``n`` (always
    enough for objects that fit a bin).  k-BFBP is a fixed-``m`` decision
    model: its ``y_j`` are pinned to 1 through bounds.
    """

    name: str
    bins: int | None = None
    split_bound: int | None = None
    stages: int | None = None
    symmetry_breaking: bool = False

    def __post_init__(self):
        if self.name not in KINDS:
            raise UnsupportedKindParameter(f"unknown model kind {self.name!r}; expected one of {KINDS}")
        if self.name == "kbfbp" and not self.split_bound:
            raise UnsupportedKindParameter("kbfbp needs a split bound")
        if self.name == "bmbp" and not self.stages:
            raise UnsupportedKindParameter("bmbp needs a stage count")
        if self.name != "kbfbp" and self.split_bound is not None:
            raise UnsupportedKindParameter(f"{self.name} takes no split bound")
        if self.name != "bmbp" and self.stages is not None:
            raise UnsupportedKindParameter(f"{self.name} takes no stage count")
        for label in ("bins", "split_bound", "stages"):
            v = getattr(self, label)
            if v is not None and v < 1:
                raise UnsupportedKindParameter(f"{label} must be positive")


def _expr(terms: Iterable[tuple[int, str]]) -> str:
    parts = []
    for coef, var in terms:
        if coef == 0:
            continue
        mag = "" if abs(coef) == 1 else f"{abs(coef)} "
        if not parts:
            parts.append(f"{'- ' if coef < 0 else ''}{mag}{var}")
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {mag}{var}")
    return " ".join(parts) if parts else "0"


def _row(name: str, terms, op: str, rhs: int) -> str:
    return f" {name}: {_expr(terms)} {op} {rhs}"


def export_model(instance: Instance, kind: ModelKind) -> str:
    """Return the LP-format text of the requested model."""
    sizes = instance.input_sizes
    n = len(sizes)
    m = kind.bins or instance.bins or n
    if kind.name == "kbfbp" and not (kind.bins or instance.bins):
        raise UnsupportedKindParameter("kbfbp is a fixed-bin decision model; give a bin count")
    cap: Fraction = instance.capacity
    den, num = cap.denominator, cap.numerator
    I = range(1, n + 1)
    J = range(1, m + 1)
    K = range(1, (kind.stages or 1) + 1)
    staged = kind.name == "bmbp"
    sfx = (lambda s: f"_{s}") if staged else (lambda s: "")

    header = [f"\\ balpack {kind.name} model: {n} objects, {m} bins"]
    if kind.name == "kbfbp":
        header.append(f"\\ split bound {kind.split_bound}")
    if staged:
        header.append(f"\\ stages {kind.stages}")
    header.append(f"\\ capacity {cap}" + (f", capacity rows scaled by {den}" if den != 1 else ""))

    rows: list[str] = []
    share = "x" if kind.name == "classic_bp" else "l"
    for j in J:
        terms = [(den * sizes[i - 1], f"{share}_{i}_{j}{sfx(s)}") for i in I for s in K]
        rows.append(_row(f"cap_{j}", terms + [(-num, f"y_{j}")], "<=", 0))
    for i in I:
        rows.append(_row(f"dem_{i}", [(1, f"{share}_{i}_{j}{sfx(s)}") for j in J for s in K], "=", 1))
    if kind.name != "classic_bp":
        idx = [(i, j, s) for i in I for j in J for s in K]
        for i, j, s in idx:
            rows.append(_row(f"lin1_{i}_{j}{sfx(s)}", [(1, f"l_{i}_{j}{sfx(s)}"), (-1, f"x_{i}_{j}{sfx(s)}")], "<=", 0))
        for i, j, s in idx:
            rows.append(_row(f"lin2_{i}_{j}{sfx(s)}", [(1, f"l_{i}_{j}{sfx(s)}"), (-1, f"a_{j}{sfx(s)}")], "<=", 0))
        for i, j, s in idx:
            rows.append(
                _row(
                    f"lin3_{i}_{j}{sfx(s)}",
                    [(1, f"l_{i}_{j}{sfx(s)}"), (-1, f"a_{j}{sfx(s)}"), (-1, f"x_{i}_{j}{sfx(s)}")],
                    ">=",
                    -1,
                )
            )
    if kind.name == "kbfbp":
        for i in I:
            rows.append(_row(f"split_{i}", [(1, f"x_{i}_{j}") for j in J], "<=", kind.split_bound))
    if staged:
        for i in I:
            for s in K:
                rows.append(_row(f"onebin_{i}_{s}", [(1, f"x_{i}_{j}_{s}") for j in J], "<=", 1))
    if kind.symmetry_breaking:
        for j in range(1, m):
            rows.append(_row(f"sym_{j}", [(1, f"y_{j}"), (-1, f"y_{j + 1}")], ">=", 0))

    bounds: list[str] = []
    if kind.name != "classic_bp":
        bounds += [f" 0 <= l_{i}_{j}{sfx(s)} <= 1" for i in I for j in J for s in K]
        bounds += [f" 0 <= a_{j}{sfx(s)} <= 1" for j in J for s in K]
    if kind.name == "kbfbp":
        bounds += [f" y_{j} = 1" for j in J]

    binaries = [f" x_{i}_{j}{sfx(s)}" for i in I for j in J for s in K] + [f" y_{j}" for j in J]

    lines = header + ["Minimize", f" obj: {_expr((1, f'y_{j}') for j in J)}", "Subject To"] + rows
    if bounds:
        lines += ["Bounds"] + bounds
    lines += ["Binary"] + binaries + ["End"]
    return "\n".join(lines) + "\n"


def expected_counts(kind: ModelKind, n: int, m: int) -> dict[str, int]:
    """Closed-form row and variable counts implied by the model's index sets."""
    K = kind.stages or 1
    out = {"cap": m, "dem": n}
    if kind.name == "classic_bp":
        out["binary"] = n * m + m
        out["continuous"] = 0
    else:
        for fam in ("lin1", "lin2", "lin3"):
            out[fam] = n * m * K
        out["binary"] = n * m * K + m
        out["continuous"] = n * m * K + m * K
    if kind.name == "kbfbp":
        out["split"] = n
    if kind.name == "bmbp":
        out["onebin"] = n * K
    if kind.symmetry_breaking:
        out["sym"] = m - 1
    return out


# ---------------------------------------------------------------- checker

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TERM = re.compile(rf"\s*([+-])?\s*(\d+)?\s*({_NAME})\s*")
_ROW = re.compile(rf"^\s*({_NAME})\s*:\s*(.*?)\s*(<=|>=|=)\s*(-?\d+)\s*$")
_OBJ = re.compile(rf"^\s*({_NAME})\s*:\s*(.*?)\s*$")
_BOUND2 = re.compile(rf"^\s*(-?\d+)\s*<=\s*({_NAME})\s*<=\s*(-?\d+)\s*$")
_BOUND1 = re.compile(rf"^\s*({_NAME})\s*(<=|>=|=)\s*(-?\d+)\s*$")
_SECTIONS = {"minimize": "objective", "subject to": "rows", "bounds": "bounds", "binary": "binary", "end": "end"}
_ORDER = ["objective", "rows", "bounds", "binary", "end"]


@dataclass
class LpModel:
    objective: dict[str, int] = field(default_factory=dict)
    rows: dict[str, tuple[dict[str, int], str, int]] = field(default_factory=dict)
    bounds: dict[str, tuple[int | None, int | None]] = field(default_factory=dict)
    binaries: list[str] = field(default_factory=list)

    @property
    def variables(self) -> set[str]:
        out = set(self.objective)
        for coeffs, _, _ in self.rows.values():
            out.update(coeffs)
        return out

    def family_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for name in self.rows:
            fam = name.split("_", 1)[0]
            counts[fam] = counts.get(fam, 0) + 1
        return counts


def _parse_expr(text: str, lineno: int) -> dict[str, int]:
    coeffs: dict[str, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if not mt or mt.end() == pos:
            raise LpFormatError(f"line {lineno}: cannot parse term at {text[pos:]!r}")
        sign, coef, var = mt.groups()
        if sign is None and not first:
            raise LpFormatError(f"line {lineno}: missing operator before {var!r}")
        value = int(coef) if coef else 1
        coeffs[var] = coeffs.get(var, 0) + (-value if sign == "-" else value)
        pos = mt.end()
        first = False
    return coeffs


def _check_name(name: str, lineno: int) -> None:
    if len(name) > 255:
        raise LpFormatError(f"line {lineno}: name longer than 255 characters")


def parse_lp(text: str) -> LpModel:
    """Parse the LP subset emitted by :func:`export_model`.

    Only integer coefficients and right-hand sides are accepted, so a
    successful parse also certifies integrality.  Raises
    :class:`LpFormatError` on any deviation.
    """
    model = LpModel()
    section = None
    seen: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTIONS:
            sec = _SECTIONS[key]
            if seen and _ORDER.index(sec) <= _ORDER.index(seen[-1]):
                raise LpFormatError(f"line {lineno}: section {line.strip()!r} out of order")
            seen.append(sec)
            section = sec
            continue
        if section is None:
            raise LpFormatError(f"line {lineno}: content before the objective section")
        if section == "end":
            raise LpFormatError(f"line {lineno}: content after End")
        if section == "objective":
            mt = _OBJ.match(line)
            if not mt:
                raise LpFormatError(f"line {lineno}: bad objective")
            model.objective = _parse_expr(mt.group(2), lineno)
        elif section == "rows":
            mt = _ROW.match(line)
            if not mt:
                raise LpFormatError(f"line {lineno}: bad constraint {line.strip()!r}")
            name, expr, op, rhs = mt.groups()
            _check_name(name, lineno)
            if name in model.rows:
                raise LpFormatError(f"line {lineno}: duplicate row {name}")
            model.rows[name] = (_parse_expr(expr, lineno), op, int(rhs))
        elif section == "bounds":
            if mt := _BOUND2.match(line):
                lo, var, hi = mt.groups()
                model.bounds[var] = (int(lo), int(hi))
            elif mt := _BOUND1.match(line):
                var, op, val = mt.groups()
                v = int(val)
                model.bounds[var] = {"=": (v, v), "<=": (None, v), ">=": (v, None)}[op]
            else:
                raise LpFormatError(f"line {lineno}: bad bound {line.strip()!r}")
        elif section == "binary":
            for var in line.split():
                if not re.fullmatch(_NAME, var):
                    raise LpFormatError(f"line {lineno}: bad variable name {var!r}")
                model.binaries.append(var)
    if not seen or seen[:2] != ["objective", "rows"] or seen[-1] != "end":
        raise LpFormatError("missing Minimize, Subject To or End section")
    known = model.variables
    for var in list(model.bounds) + model.binaries:
        if var not in known:
            raise LpFormatError(f"variable {var} is declared but never used")
    if len(set(model.binaries)) != len(model.binaries):
        raise LpFormatError("duplicate binary declaration")
    return model
