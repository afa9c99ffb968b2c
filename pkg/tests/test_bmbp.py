from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given

from balpack import (
    Packing,
    PreconditionViolated,
    check_bmbp,
    distribute_phase2,
    inflate_sizes,
    lower_bound_bins,
    pack_phase1,
    solve_bmbp,
    validate_instance,
)
from balpack.kernels import available_backends
from refs import ref_distribute, ref_pack, theorem_instances

F = Fraction


def test_worked_example_phase1(worked):
    pk = pack_phase1(worked, 3)
    assert pk.boxes == ((0,), (1, 4), (2, 3))
    assert list(pk.box_sizes) == [8, 11, 11]


def test_worked_example_plan(worked):
    plan = solve_bmbp(worked)
    assert plan.sigma == (1, 0, 2)
    assert plan.tilde_c == 10
    assert list(plan.lambda1) == [F(10, 11), 1, F(9, 11)]
    assert list(plan.lambda2) == [0, F(2, 11), F(1, 11)]
    assert list(plan.bin_loads) == [10, 10, 10]
    # the zero stage-2 share of bin 0 is not listed
    assert [(a.object, a.bin, a.stage) for a in plan.assignments] == [
        (1, 0, 1), (4, 0, 1), (0, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 1), (3, 2, 1), (1, 2, 2), (4, 2, 2),
    ]


def test_inflation_hand_example():
    # 10 - L = (10 + 3L) / 2  gives  L = 2
    inst = validate_instance([1, 10, 1, 1], 10)
    infl = inflate_sizes(inst, 2)
    assert infl.level == 2 and infl.raised_count == 3
    assert list(infl.inflated_sizes) == [10, 2, 2, 2]
    assert inst.sizes[0] - infl.level == infl.total / 2
    plan = solve_bmbp(inst)
    assert list(plan.lambda1) == [F(4, 5), 1]
    assert list(plan.lambda2) == [0, F(1, 5)]
    assert list(plan.bin_loads) == [8, 5]
    assert check_bmbp(inst, plan).ok


def test_inflation_with_rational_level():
    inst = validate_instance([10, 1, 1], 10)
    plan = solve_bmbp(inst)
    assert list(plan.lambda1) == [F(3, 4), 1]
    assert list(plan.lambda2) == [0, F(1, 4)]
    assert list(plan.bin_loads) == [F(15, 2), F(9, 2)]


def test_no_inflation_when_spread_fits(worked):
    infl = inflate_sizes(worked, 3)
    assert infl.raised_count == 0 and infl.scale == 1 and infl.level == 4


def test_single_object():
    plan = solve_bmbp(validate_instance([5], 7))
    assert list(plan.lambda1) == [1] and list(plan.lambda2) == [0]
    assert list(plan.bin_loads) == [5]


@pytest.mark.parametrize(
    "sizes, cap",
    [([20, 1], 10), ([19, 19], 10), ([15, 14, 14], 10)],
)
def test_hypothesis_violations_are_rejected(sizes, cap):
    with pytest.raises(PreconditionViolated):
        solve_bmbp(validate_instance(sizes, cap))


def test_phase2_rejects_unbalanced_boxes():
    pk = Packing(((0,), (1,)), [1, 9])
    with pytest.raises(PreconditionViolated):
        distribute_phase2(pk, 5)
    with pytest.raises(PreconditionViolated):
        distribute_phase2(pk, 4)


def test_phase2_accepts_rational_boxes():
    pk = Packing(((0,), (1,), (2,)), [F(7, 2), F(9, 2), 4])
    plan = distribute_phase2(pk, 4)
    sigma, l1, l2 = ref_distribute([F(7, 2), F(9, 2), 4])
    assert list(plan.sigma) == sigma and list(plan.lambda1) == l1 and list(plan.lambda2) == l2
    assert list(plan.bin_loads) == [4, 4, 4]


def test_capacity_rational():
    inst = validate_instance([6, 5, 5], "16/3")
    plan = solve_bmbp(inst)
    assert plan.m == 3 and check_bmbp(inst, plan).ok


@given(theorem_instances())
def test_plan_is_feasible_and_two_bin(inst):
    plan = solve_bmbp(inst)
    assert check_bmbp(inst, plan).ok
    bins_of = defaultdict(set)
    for a in plan.assignments:
        bins_of[a.object].add(a.bin)
    assert all(len(b) <= 2 for b in bins_of.values())
    assert len(bins_of) == inst.n
    m = lower_bound_bins(inst)
    if not plan.inflation.raised_count:
        assert list(plan.bin_loads) == [F(inst.total, m)] * m
    assert all(0 <= v <= 1 for v in plan.lambda1)
    assert all(0 <= v <= 1 for v in plan.lambda2)


@given(theorem_instances())
def test_phase1_is_greedy_and_balanced(inst):
    m = lower_bound_bins(inst)
    pk = pack_phase1(inst, m)
    box_of, loads = ref_pack(inst.sizes, m)
    assert list(pk.box_sizes) == loads
    assert sorted(i for box in pk.boxes for i in box) == list(range(inst.n))
    if not inflate_sizes(inst, m).raised_count:
        assert max(loads) - min(loads) <= F(inst.total, m)


@given(theorem_instances())
def test_inflation_level_equation(inst):
    m = lower_bound_bins(inst)
    infl = inflate_sizes(inst, m)
    if infl.raised_count:
        assert inst.sizes[0] - infl.level == infl.total / m
        assert inst.sizes[0] - infl.level <= inst.capacity
        assert all(max(a, infl.level) == b for a, b in zip(inst.sizes, infl.inflated_sizes))


@given(theorem_instances())
def test_backends_give_identical_plans(inst):
    plans = [solve_bmbp(inst, backend=b) for b in available_backends()]
    for p in plans[1:]:
        assert p.sigma == plans[0].sigma
        assert list(p.lambda1) == list(plans[0].lambda1)
        assert p.assignments == plans[0].assignments
