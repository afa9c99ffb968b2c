"""Command-line entry point.

Exit status: 0 success or feasible, 1 infeasible / no witness / violations,
2 input error, 3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from balpack import __version__, formats
from balpack.bench import random_instance, time_solve
from balpack.bmbp import solve_bmbp
from balpack.core import BalpackError, InstanceTooLarge, format_rational
from balpack.exact import binpacking_assignment, solve_kbfbp_decision
from balpack.kernels import available_backends
from balpack.mip import KINDS, ModelKind, export_model
from balpack.reductions import (
    PARTITION,
    SUBSET_THIRD,
    brute_force_partition,
    brute_force_subset_third,
    extract_partition,
    extract_subset_third,
    partition_to_2bfbp,
    subsetsum_to_3bfbp,
)
from balpack.sweep import run_sweep, sample_subset_third, universe
from balpack.verifier import check_bmbp, check_kbfbp

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

_REDUCTION_KINDS = {"partition": PARTITION, "subset-third": SUBSET_THIRD}


def _cmd_solve_bmbp(args) -> int:
    instance = formats.instance_from_json(formats.read_json(args.input))
    plan = solve_bmbp(instance, backend=args.backend)
    formats.write_json(formats.plan_to_json(plan), args.output)
    return EXIT_OK


def _cmd_solve_exact(args) -> int:
    instance = formats.instance_from_json(formats.read_json(args.input))
    witness = solve_kbfbp_decision(
        instance, args.bins, args.split, prune_symmetry=not args.no_symmetry
    )
    if witness is None:
        print("no witness: the instance is infeasible", file=sys.stderr)
        return EXIT_NO
    formats.write_json(formats.witness_to_json(witness), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    instance = formats.instance_from_json(formats.read_json(args.input))
    doc = formats.read_json(args.solution)
    if args.model == "bmbp":
        records, bins = formats.assignments_from_json(doc)
        report = check_bmbp(instance, records, stages=args.stages, bins=bins or instance.bins)
    else:
        k = args.split or instance.split_bound
        if k is None:
            raise formats.InvalidInstance("kbfbp verification needs --split or a split_bound in the instance")
        report = check_kbfbp(instance, formats.witness_from_json(doc), k)
    formats.write_json(formats.report_to_json(report), args.output)
    return EXIT_OK if report.ok else EXIT_NO


def _read_sizes(path):
    return formats.sizes_from_json(formats.read_json(path))


def _cmd_reduce(args) -> int:
    values = _read_sizes(args.input)
    fn = partition_to_2bfbp if args.kind == "partition" else subsetsum_to_3bfbp
    formats.write_json(formats.reduced_to_json(fn(values)), args.output)
    return EXIT_OK


def _cmd_extract(args) -> int:
    reduced = formats.reduced_from_json(formats.read_json(args.input))
    if args.kind and _REDUCTION_KINDS[args.kind] != reduced.source_kind:
        raise formats.InvalidInstance(f"--kind {args.kind} does not match a {reduced.source_kind} reduction")
    witness = formats.witness_from_json(formats.read_json(args.solution))
    if reduced.source_kind == PARTITION:
        a1, a2 = extract_partition(witness, reduced)
        doc = {"kind": "partition", "parts": [list(a1), list(a2)]}
    else:
        doc = {"kind": "subset-third", "subset": list(extract_subset_third(witness, reduced))}
    formats.write_json(doc, args.output)
    return EXIT_OK


def _cmd_export_mip(args) -> int:
    instance = formats.instance_from_json(formats.read_json(args.input))
    stages = args.stages
    if args.kind == "bmbp" and stages is None:
        stages = instance.stages or 2
    split = args.split
    if args.kind == "kbfbp" and split is None:
        split = instance.split_bound
    kind = ModelKind(args.kind, bins=args.bins, split_bound=split, stages=stages,
                     symmetry_breaking=args.symmetry_breaking)
    text = export_model(instance, kind)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def _sweep(args) -> int:
    kind = _REDUCTION_KINDS[args.kind]
    if kind == PARTITION:
        cases = universe(kind, args.max_n, args.max_size)
    else:
        cases = sample_subset_third(args.samples, args.seed, args.max_n, args.max_size)
    results = run_sweep(kind, cases, jobs=args.jobs)
    bad = [r for r in results if not r.agrees]
    doc = {
        "kind": args.kind,
        "cases": len(results),
        "yes": sum(r.oracle for r in results),
        "disagreements": [list(r.source) for r in bad],
    }
    formats.write_json(doc, args.output)
    return EXIT_OK if not bad else EXIT_NO


def _cmd_oracle(args) -> int:
    if args.sweep:
        if args.kind == "binpacking":
            raise formats.InvalidInstance("--sweep applies to partition and subset-third")
        return _sweep(args)
    if args.input is None:
        raise formats.InvalidInstance("oracle needs -i unless --sweep is given")
    if args.kind == "binpacking":
        instance = formats.instance_from_json(formats.read_json(args.input))
        m = args.bins or instance.bins
        if m is None:
            raise formats.InvalidInstance("binpacking oracle needs --bins or a bins field")
        where = binpacking_assignment(instance, m)
        doc = {"feasible": where is not None}
        if where is not None:
            doc["bin_of"] = [j + 1 for j in where]
    elif args.kind == "partition":
        found = brute_force_partition(_read_sizes(args.input))
        doc = {"feasible": found is not None}
        if found is not None:
            doc["parts"] = [list(found[0]), list(found[1])]
    else:
        found = brute_force_subset_third(_read_sizes(args.input))
        doc = {"feasible": found is not None}
        if found is not None:
            doc["subset"] = list(found)
    formats.write_json(doc, args.output)
    return EXIT_OK if doc["feasible"] else EXIT_NO


def _cmd_bench(args) -> int:
    instance = random_instance(args.n, args.seed, base=args.base, capacity=args.capacity)
    if args.instance_out:
        formats.write_json(formats.instance_to_json(instance), args.instance_out)
    t = time_solve(instance, backend=args.backend, repeat=args.repeat)
    doc = {
        "n": t.n,
        "seed": args.seed,
        "base": args.base,
        "capacity": format_rational(instance.capacity),
        "bins": t.bins,
        "inflated": t.inflated,
        "backend": t.backend,
        "seconds": round(t.seconds, 6),
    }
    formats.write_json(doc, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="balpack", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("solve-bmbp", _cmd_solve_bmbp, "two-stage allocation into ceil(S/C) bins")
    sp.add_argument("-i", "--input", required=True, help="instance JSON")
    sp.add_argument("-o", "--output", help="plan JSON (default: stdout)")
    sp.add_argument("--backend", choices=available_backends())

    sp = add("solve-exact", _cmd_solve_exact, "exact k-BFBP decision")
    sp.add_argument("-i", "--input", required=True, help="instance JSON")
    sp.add_argument("--bins", type=int, help="bin count (default: instance bins)")
    sp.add_argument("--split", type=int, help="split bound k (default: instance split_bound)")
    sp.add_argument("--no-symmetry", action="store_true", help="disable bin-relabeling pruning")
    sp.add_argument("-o", "--output", help="witness JSON (default: stdout)")

    sp = add("verify", _cmd_verify, "check a plan or witness against every constraint")
    sp.add_argument("--model", choices=("bmbp", "kbfbp"), required=True)
    sp.add_argument("-i", "--input", required=True, help="instance JSON")
    sp.add_argument("-s", "--solution", required=True, help="plan or witness JSON")
    sp.add_argument("--stages", type=int, default=2)
    sp.add_argument("--split", type=int)
    sp.add_argument("-o", "--output", help="report JSON (default: stdout)")

    sp = add("reduce", _cmd_reduce, "build a reduced k-BFBP instance")
    sp.add_argument("--kind", choices=tuple(_REDUCTION_KINDS), required=True)
    sp.add_argument("-i", "--input", required=True, help="set JSON (list or {\"sizes\": [...]})")
    sp.add_argument("-o", "--output")

    sp = add("extract", _cmd_extract, "turn a witness on a reduced instance into a certificate")
    sp.add_argument("--kind", choices=tuple(_REDUCTION_KINDS))
    sp.add_argument("-i", "--input", required=True, help="reduced instance JSON")
    sp.add_argument("-s", "--solution", required=True, help="witness JSON")
    sp.add_argument("-o", "--output")

    sp = add("export-mip", _cmd_export_mip, "write an LP-format model")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("-i", "--input", required=True, help="instance JSON")
    sp.add_argument("--bins", type=int)
    sp.add_argument("--split", type=int)
    sp.add_argument("--stages", type=int)
    sp.add_argument("--symmetry-breaking", action="store_true")
    sp.add_argument("-o", "--output", help="LP file (default: stdout)")

    sp = add("oracle", _cmd_oracle, "brute-force oracles and reduction sweeps")
    sp.add_argument("--kind", choices=("partition", "subset-third", "binpacking"), required=True)
    sp.add_argument("-i", "--input")
    sp.add_argument("--bins", type=int)
    sp.add_argument("--sweep", action="store_true", help="oracle vs exact solver on a universe of sources")
    sp.add_argument("--max-n", type=int, default=None)
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--samples", type=int, default=200, help="subset-third sample size")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--output")

    sp = add("bench", _cmd_bench, "time the two-stage solver on a random instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--base", type=int, default=1, help="smallest possible size L")
    sp.add_argument("--capacity", type=int, default=100, help="sizes drawn from [L, L+capacity]")
    sp.add_argument("--backend", choices=available_backends())
    sp.add_argument("--repeat", type=int, default=1)
    sp.add_argument("--instance-out", help="also write the generated instance")
    sp.add_argument("-o", "--output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "oracle" and args.sweep:
        default_n, default_size = (5, 8) if args.kind == "partition" else (4, 12)
        args.max_n = args.max_n or default_n
        args.max_size = args.max_size or default_size
    try:
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"balpack: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (BalpackError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"balpack: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
