from fractions import Fraction

import pytest

from balpack import Assignment, DimensionMismatch, KbfbpWitness, check_bmbp, check_kbfbp, solve_bmbp, validate_instance

F = Fraction

A, B = (1, 0, 1), (0, 1, 1)
PROOF_X = (A, B, B, A, A, B)


@pytest.fixture
def reduced():
    return validate_instance([2, 3, 3, 4, 10, 10], "32/3")


def test_proof_witness_is_valid(reduced):
    w = KbfbpWitness(PROOF_X, (F(2, 3), F(2, 3), F(1, 3)))
    assert check_kbfbp(reduced, w, 2).ok
    assert not check_kbfbp(reduced, w, 1).ok


def test_perturbed_factor_breaks_demand(reduced):
    w = KbfbpWitness(PROOF_X, (F(2, 3) + F(1, 1000), F(2, 3), F(1, 3)))
    report = check_kbfbp(reduced, w, 2)
    dem = {v.subject for v in report.violations if v.constraint == "dem"}
    assert dem == {(i,) for i, row in enumerate(PROOF_X) if row[0]}
    assert "cap" in report.families()


def test_empty_row_breaks_demand(reduced):
    x = ((0, 0, 0),) + PROOF_X[1:]
    report = check_kbfbp(reduced, KbfbpWitness(x, (F(2, 3), F(2, 3), F(1, 3))), 2)
    assert ("dem", (0,)) in {(v.constraint, v.subject) for v in report.violations}


def test_kbfbp_binary_and_bounds(reduced):
    x = ((2, 0, 1),) + PROOF_X[1:]
    report = check_kbfbp(reduced, KbfbpWitness(x, (F(3, 2), F(2, 3), F(-1, 3))), 2)
    assert {"binary", "bound"} <= report.families()


def test_kbfbp_dimension_mismatch(reduced):
    with pytest.raises(DimensionMismatch):
        check_kbfbp(reduced, KbfbpWitness(PROOF_X[:3], (1, 1, 1)), 2)


def test_worked_plan_verifies(worked):
    plan = solve_bmbp(worked)
    assert check_bmbp(worked, plan).ok


def test_two_bins_in_one_stage(worked):
    recs = [Assignment(i, 0, 1, F(1)) for i in range(5)]
    recs[0] = Assignment(0, 0, 1, F(1, 2))
    recs.append(Assignment(0, 1, 1, F(1, 2)))
    report = check_bmbp(worked, recs, bins=3)
    assert "onebin" in report.families()
    assert "balance" in report.families()
    assert "cap" in report.families()


def test_unequal_fractions_in_one_bin_stage():
    inst = validate_instance([4, 4], 10)
    recs = [Assignment(0, 0, 1, F(1, 2)), Assignment(1, 0, 1, F(1, 3)),
            Assignment(0, 1, 2, F(1, 2)), Assignment(1, 1, 2, F(2, 3))]
    report = check_bmbp(inst, recs, bins=2)
    assert [v.constraint for v in report.violations] == ["balance", "balance"]


def test_bmbp_stage_and_range_checks(worked):
    recs = [Assignment(i, 0, 3, F(1)) for i in range(5)]
    assert "stage" in check_bmbp(worked, recs, bins=3).families()
    with pytest.raises(DimensionMismatch):
        check_bmbp(worked, [Assignment(9, 0, 1, F(1))], bins=3)
    with pytest.raises(DimensionMismatch):
        check_bmbp(worked, [Assignment(0, 5, 1, F(1))], bins=3)


def test_duplicate_records_are_summed():
    inst = validate_instance([5], 10)
    recs = [Assignment(0, 0, 1, F(1, 2)), Assignment(0, 0, 1, F(1, 2))]
    assert check_bmbp(inst, recs, bins=1).ok
