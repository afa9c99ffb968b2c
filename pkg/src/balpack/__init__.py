"""Balanced fractional bin packing: exact solvers, verifier, reductions and MIP export."""

from balpack.bmbp import distribute_phase2, inflate_sizes, pack_phase1, solve_bmbp
from balpack.core import (
    Assignment,
    BalpackError,
    CapacityTooSmallForObject,
    DimensionMismatch,
    EmptyInstance,
    Instance,
    InstanceTooLarge,
    InvalidInstance,
    InvariantError,
    KbfbpWitness,
    NonPositiveCapacity,
    NonPositiveSize,
    Packing,
    PreconditionViolated,
    TwoStagePlan,
    lower_bound_bins,
    validate_instance,
)
from balpack.exact import brute_force_binpacking, enumerate_patterns, feasible_alpha, solve_kbfbp_decision
from balpack.mip import ModelKind, expected_counts, export_model, parse_lp
from balpack.reductions import (
    MalformedWitness,
    ReducedInstance,
    SumNotDivisible,
    TrivialInstance,
    brute_force_partition,
    brute_force_subset_third,
    extract_partition,
    extract_subset_third,
    partition_to_2bfbp,
    subsetsum_to_3bfbp,
)
from balpack.verifier import VerificationReport, Violation, check_bmbp, check_kbfbp

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BalpackError",
    "CapacityTooSmallForObject",
    "DimensionMismatch",
    "EmptyInstance",
    "Instance",
    "InstanceTooLarge",
    "InvalidInstance",
    "InvariantError",
    "KbfbpWitness",
    "MalformedWitness",
    "ModelKind",
    "NonPositiveCapacity",
    "NonPositiveSize",
    "Packing",
    "PreconditionViolated",
    "ReducedInstance",
    "SumNotDivisible",
    "TrivialInstance",
    "TwoStagePlan",
    "VerificationReport",
    "Violation",
    "brute_force_binpacking",
    "brute_force_partition",
    "brute_force_subset_third",
    "check_bmbp",
    "check_kbfbp",
    "distribute_phase2",
    "enumerate_patterns",
    "expected_counts",
    "export_model",
    "extract_partition",
    "extract_subset_third",
    "feasible_alpha",
    "inflate_sizes",
    "lower_bound_bins",
    "pack_phase1",
    "parse_lp",
    "partition_to_2bfbp",
    "solve_bmbp",
    "solve_kbfbp_decision",
    "subsetsum_to_3bfbp",
    "validate_instance",
]
