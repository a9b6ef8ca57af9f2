# coding: utf-8
#

import pytest

from foldcat import (Discreteness, FunctorData, NonGlobularError, PreconditionError, Shape, Status, arrow_category,
                     cell_levels, check_globular, check_power_membership, classify_shape, deep_composable,
                     discreteness, export_view, identity_functor, iterated_boundary, power_structure,
                     validate_functor, validate_presentation)


def test_arrow_category_fix_one(fix_one):
    C = arrow_category(fix_one)
    assert C.objects() == ["1_A"]
    assert C.hom("1_A", "1_A") == ["1_A"]
    assert C.identity("1_A") == "1_A"


def test_arrow_category_fix_iso(fix_iso):
    C = arrow_category(fix_iso)
    assert C.hom("u", "u") == ["1_<u,0>"]
    assert C.dom("1_<u,0>") == "u"
    assert C.dom("1_<u,1>") == "1_<u,0>"
    assert not C.has_arrow("u")
    assert "1_<u,1>" in C.frontier


def test_check_globular(fix_one, fix_iso, fix_par):
    assert check_globular(fix_one).ok
    assert check_globular(fix_iso).ok
    report = check_globular(fix_par)
    [fail] = report.failures()
    assert fail.witness == {"cell": "alpha", "source": "f", "target": "g"}


def test_iterated_boundary(fix_iso, fix_par):
    assert iterated_boundary(fix_iso, "1_<u,0>", 1, "dom") == "<u,0>"
    assert iterated_boundary(fix_iso, "1_<u,1>", 2, "dom") == "<u,0>"
    assert iterated_boundary(fix_iso, "u", 2) is None
    with pytest.raises(PreconditionError):
        iterated_boundary(fix_iso, "u", 0)
    with pytest.raises(NonGlobularError):
        iterated_boundary(fix_par, "alpha", 1)


def test_power_structure_fix_one(fix_one):
    power = power_structure(fix_one, 2)
    assert power.objects() == [("1_A", "1_A")]
    assert power.arrows() == [("1_A", "1_A")]
    assert power.report.ok


def test_power_structure_fix_iso(fix_iso):
    power = power_structure(fix_iso, 2)
    assert power.has_object(("u", "v"))
    assert power.has_object(("1_<u,0>", "1_<v,0>"))
    assert power.has_arrow(("1_<u,0>", "1_<v,0>"))
    assert power.switchback(("1_<u,0>", "1_<v,0>")) == ("1_<u,0>", "1_<v,0>")
    assert power.report.failures() == []


def test_deep_composable(fix_iso):
    assert deep_composable(fix_iso, ("u", "v"))
    assert deep_composable(fix_iso, ("1_<u,0>", "1_<v,0>"))
    assert not deep_composable(fix_iso, ("u", "u"))


@pytest.mark.parametrize("name", ["fix_one", "fix_par", "fix_iso", "fix_2cat"])
@pytest.mark.parametrize("n", [2, 3])
def test_power_membership_formula(request, name, n):
    P = request.getfixturevalue(name)
    power = power_structure(P, n, verify=False, max_states=10 ** 6)
    report = check_power_membership(power, max_states=10 ** 6)
    assert report.failures() == []
    [summary] = report.select("power-membership", Status.PASS)
    assert summary.witness["n"] == n


def test_power_zero(fix_iso):
    closed = power_structure(fix_iso, 0)
    assert ("X",) in closed.objects()
    assert ("<id_X,0>",) in closed.objects()
    bare = power_structure(fix_iso, 0, j_closed=False)
    assert bare.objects() == [("X",), ("Y",)]
    assert bare.report.select("power-zero-mode")


def test_validate_identity_functor(fix_iso):
    report = validate_functor(identity_functor(fix_iso))
    assert report.ok


def test_validate_swap_functor(fix_iso):
    swap = {"X": "Y", "Y": "X", "u": "v", "v": "u", "id_X": "id_Y", "id_Y": "id_X"}

    def rename(token):
        for old, new in swap.items():
            if token in (old, f"<{old},0>", f"<{old},1>", f"<{old},2>", f"1_<{old},0>", f"1_<{old},1>"):
                return token.replace(old, new)
        return token

    F = FunctorData(fix_iso, fix_iso, {x: rename(x) for x in fix_iso.objects()},
                    {f: rename(f) for f in fix_iso.arrows()})
    assert validate_functor(F).ok


def test_validate_functor_detects_bad_arrow_map(fix_iso):
    F = identity_functor(fix_iso)
    F.arrow_map["u"] = "v"
    report = validate_functor(F)
    assert {"arrow": "u"} in [f.witness for f in report.failures("functor-typing")]


def test_cell_levels(fix_iso, fix_one):
    levels = cell_levels(fix_iso)
    assert levels["X"] == 0
    assert levels["<u,0>"] == 1
    assert levels["<u,1>"] == 2
    assert not levels.is_exact("<u,2>")
    assert cell_levels(fix_one, max_level=8)["A"] == 8


def test_discreteness(fix_iso):
    assert discreteness(fix_iso, "<u,0>") == Discreteness.YES
    assert discreteness(fix_iso, "X") == Discreteness.NO
    assert discreteness(fix_iso, "<u,0>", depth=5) == Discreteness.FRONTIER


def test_classify_shape(fix_iso, fix_2cat, fix_par, fix_2cat_identity, fix_one):
    shape = classify_shape(fix_iso)
    assert shape.shape == Shape.CATEGORY
    assert shape.frontier_limited
    assert classify_shape(fix_one).shape == Shape.CATEGORY
    assert classify_shape(fix_2cat).shape == Shape.BICATEGORY_LIKE
    assert classify_shape(fix_par).shape == Shape.GENERAL
    assert classify_shape(fix_2cat_identity).shape == Shape.CATEGORY


def test_export_view(fix_iso):
    exported = export_view(arrow_category(fix_iso))
    assert "@u" in exported.objects()
    assert exported.dom("1_<u,0>") == "@u"
    assert exported.switchback("1_<u,0>") == "@1_<u,0>"
    assert validate_presentation(exported).failures("J-injective") == []


def test_export_power_view(fix_one):
    exported = export_view(power_structure(fix_one, 2))
    assert exported.objects() == ["@(1_A,1_A)"]
    assert exported.arrows() == ["(1_A,1_A)"]
    assert validate_presentation(exported).ok
    assert all(f.status == Status.PASS for f in validate_presentation(exported).findings)
