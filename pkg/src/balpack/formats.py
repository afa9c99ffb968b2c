"""JSON documents read and written by the CLI.

Files are 1-based (objects in input order, bins, sigma); the Python API is
0-based.  Rationals are ``"p/q"`` strings in lowest terms, or bare ints.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from balpack.core import (
    Assignment,
    Instance,
    InvalidInstance,
    KbfbpWitness,
    TwoStagePlan,
    as_rational,
    format_rational,
    validate_instance,
)
from balpack.reductions import ReducedInstance, reduced_from_parts
from balpack.verifier import VerificationReport


def read_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_json(doc, path: str | Path | None) -> None:
    """Write to ``path``, or to stdout when ``path`` is None."""
    text = dumps(doc)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _rat(value):
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInstance(f"bad rational {value!r}: {exc}") from None


def instance_to_json(instance: Instance) -> dict:
    doc = {"sizes": list(instance.input_sizes), "capacity": format_rational(instance.capacity)}
    for key in ("bins", "stages", "split_bound"):
        value = getattr(instance, key)
        if value is not None:
            doc[key] = value
    return doc


def instance_from_json(doc) -> Instance:
    if not isinstance(doc, dict) or "sizes" not in doc or "capacity" not in doc:
        raise InvalidInstance('instance JSON needs "sizes" and "capacity"')
    if not isinstance(doc["sizes"], list):
        raise InvalidInstance('"sizes" must be a list of integers')
    return validate_instance(
        doc["sizes"],
        _rat(doc["capacity"]),
        bins=doc.get("bins"),
        stages=doc.get("stages"),
        split_bound=doc.get("split_bound"),
    )


def sizes_from_json(doc) -> list[int]:
    """A bare multiset: either a JSON list or an object with ``"sizes"``."""
    if isinstance(doc, dict):
        doc = doc.get("sizes")
    if not isinstance(doc, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in doc):
        raise InvalidInstance("expected a list of integers")
    return doc


def plan_to_json(plan: TwoStagePlan) -> dict:
    return {
        "bins": plan.m,
        "tilde_c": format_rational(plan.tilde_c),
        "sigma": [j + 1 for j in plan.sigma],
        "lambda1": [format_rational(v) for v in plan.lambda1],
        "lambda2": [format_rational(v) for v in plan.lambda2],
        "assignments": [
            {"object": a.object + 1, "bin": a.bin + 1, "stage": a.stage, "fraction": format_rational(a.fraction)}
            for a in plan.iter_assignments()
        ],
        "bin_loads": [format_rational(v) for v in plan.bin_loads],
    }


def assignments_from_json(doc) -> tuple[list[Assignment], int | None]:
    """Fraction records (0-based) and the declared bin count of a plan document."""
    try:
        records = [
            Assignment(int(r["object"]) - 1, int(r["bin"]) - 1, int(r["stage"]), _rat(r["fraction"]))
            for r in doc["assignments"]
        ]
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"malformed plan document: {exc}") from None
    return records, doc.get("bins")


def witness_to_json(witness: KbfbpWitness) -> dict:
    return {"x": [list(row) for row in witness.x], "alpha": [format_rational(a) for a in witness.alpha]}


def witness_from_json(doc) -> KbfbpWitness:
    try:
        x = tuple(tuple(int(v) for v in row) for row in doc["x"])
        alpha = tuple(_rat(a) for a in doc["alpha"])
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"malformed witness document: {exc}") from None
    return KbfbpWitness(x, alpha)


def _one_based(v) -> list[int]:
    # stage labels are already 1-based: last slot of (obj, stage) and (obj, bin, stage)
    keep = len(v.subject) - 1 if v.constraint == "onebin" or len(v.subject) == 3 else None
    return [s if k == keep else s + 1 for k, s in enumerate(v.subject)]


def report_to_json(report: VerificationReport) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {
                "constraint": v.constraint,
                "subject": _one_based(v),
                "lhs": format_rational(v.lhs),
                "rhs": format_rational(v.rhs),
            }
            for v in report.violations
        ],
    }


def reduced_to_json(reduced: ReducedInstance) -> dict:
    doc = instance_to_json(reduced.instance)
    doc["reduction"] = {
        "kind": reduced.source_kind,
        "pad_value": reduced.pad_value,
        "pad_count": reduced.pad_count,
        "residue": reduced.residue,
    }
    return doc


def reduced_from_json(doc) -> ReducedInstance:
    instance = instance_from_json(doc)
    meta = doc.get("reduction")
    if not isinstance(meta, dict):
        raise InvalidInstance('reduced instance JSON needs a "reduction" object')
    try:
        return reduced_from_parts(
            instance, meta["kind"], int(meta["pad_value"]), int(meta["pad_count"]), int(meta["residue"])
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"malformed reduction metadata: {exc}") from None
