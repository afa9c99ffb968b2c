from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from balpack import ModelKind, expected_counts, export_model, parse_lp, validate_instance
from balpack.mip import LpFormatError, UnsupportedKindParameter

GOLDEN = Path(__file__).parent / "golden"

WORKED_KINDS = {
    "classic_bp": ModelKind("classic_bp"),
    "bfbp": ModelKind("bfbp"),
    "kbfbp": ModelKind("kbfbp", bins=3, split_bound=2),
    "bmbp": ModelKind("bmbp", bins=3, stages=2),
}


def _counts(model):
    out = model.family_counts()
    out["binary"] = len(model.binaries)
    out["continuous"] = len(model.variables) - len(model.binaries)
    return out


@pytest.mark.parametrize("name", sorted(WORKED_KINDS))
def test_golden_files(worked, name):
    text = export_model(worked, WORKED_KINDS[name])
    assert text.encode() == (GOLDEN / f"worked_{name}.lp").read_bytes()


def test_classic_counts(worked):
    model = parse_lp(export_model(worked, ModelKind("classic_bp", bins=5)))
    assert model.family_counts() == {"cap": 5, "dem": 5}
    assert len(model.binaries) == 30


def test_bmbp_onebin_rows(worked):
    model = parse_lp(export_model(worked, WORKED_KINDS["bmbp"]))
    assert model.family_counts()["onebin"] == 10


def test_rational_capacity_is_scaled():
    inst = validate_instance([2, 3, 3, 4, 10, 10], "32/3")
    model = parse_lp(export_model(inst, ModelKind("kbfbp", bins=3, split_bound=2)))
    coeffs, op, rhs = model.rows["cap_1"]
    assert coeffs == {"l_1_1": 6, "l_2_1": 9, "l_3_1": 9, "l_4_1": 12, "l_5_1": 30, "l_6_1": 30, "y_1": -32}
    assert (op, rhs) == ("<=", 0)


def test_symmetry_rows(worked):
    model = parse_lp(export_model(worked, ModelKind("bfbp", bins=4, symmetry_breaking=True)))
    assert model.rows["sym_3"] == ({"y_3": 1, "y_4": -1}, ">=", 0)


def test_kbfbp_pins_bins(worked):
    model = parse_lp(export_model(worked, WORKED_KINDS["kbfbp"]))
    assert model.bounds["y_2"] == (1, 1)


@pytest.mark.parametrize(
    "kw",
    [
        dict(name="mps"),
        dict(name="kbfbp"),
        dict(name="bmbp"),
        dict(name="bfbp", split_bound=2),
        dict(name="classic_bp", stages=2),
        dict(name="bfbp", bins=0),
    ],
)
def test_bad_kinds(kw):
    with pytest.raises(UnsupportedKindParameter):
        ModelKind(**kw)


def test_kbfbp_needs_bins(worked):
    with pytest.raises(UnsupportedKindParameter):
        export_model(worked, ModelKind("kbfbp", split_bound=2))


@pytest.mark.parametrize(
    "text",
    [
        "Subject To\n c: x <= 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n c: x <= 1\n",
        "Minimize\n obj: x\nSubject To\n c: x y <= 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n c: 1.5 x <= 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n c: x <= 1\n c: x <= 2\nEnd\n",
        "Minimize\n obj: x\nSubject To\n c: x <= 1\nBinary\n z\nEnd\n",
        "Minimize\n obj: x\nBinary\n x\nSubject To\n c: x <= 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n " + "c" * 256 + ": x <= 1\nEnd\n",
    ],
)
def test_checker_rejects(text):
    with pytest.raises(LpFormatError):
        parse_lp(text)


@given(
    st.lists(st.integers(1, 30), min_size=1, max_size=6),
    st.fractions(min_value=1, max_value=40, max_denominator=5),
    st.sampled_from(["classic_bp", "bfbp", "kbfbp", "bmbp"]),
    st.integers(1, 4),
    st.integers(1, 3),
    st.booleans(),
)
def test_exports_reparse_with_closed_form_counts(sizes, cap, name, m, extra, sym):
    inst = validate_instance(sizes, cap)
    kind = ModelKind(
        name,
        bins=m,
        split_bound=extra if name == "kbfbp" else None,
        stages=extra if name == "bmbp" else None,
        symmetry_breaking=sym,
    )
    model = parse_lp(export_model(inst, kind))
    expect = expected_counts(kind, inst.n, m)
    if expect.get("sym") == 0:
        del expect["sym"]
    assert _counts(model) == expect
    for coeffs, _, _ in model.rows.values():
        assert all(isinstance(c, int) for c in coeffs.values())
