# coding: utf-8
#

import json

import pytest

from conftest import read_fixture
from foldcat import (DanglingReferenceError, DuplicateIdError, FrontierIncompleteError, Path, PresentationError,
                     Status, emit_presentation, from_category, parse_presentation, restrict_window, switchback,
                     truncate_oracle, validate_presentation)


def test_parse_fix_one(fix_one):
    assert fix_one.objects() == ["A"]
    assert fix_one.arrows() == ["1_A"]
    assert fix_one.identity("A") == "1_A"
    assert fix_one.switchback("1_A") == "A"


def test_validate_fix_one(fix_one):
    report = validate_presentation(fix_one)
    assert report.ok
    assert all(f.status == Status.PASS for f in report.findings)
    assert report.summary == {"pass": 7, "fail": 0, "skipped-frontier": 0, "skipped-missing-theta": 0}


def test_validate_detects_j_collision(fix_one):
    P = fix_one.replace(objects=["A", "B"],
                        arrows={"1_A": ("A", "A"), "1_B": ("B", "B")},
                        identity={"A": "1_A", "B": "1_B"},
                        bcomp={("1_A", "1_A"): "1_A", ("1_B", "1_B"): "1_B"},
                        J={"1_A": "A", "1_B": "A"})
    report = validate_presentation(P)
    assert not report.ok
    [fail] = report.failures("J-injective")
    assert fail.witness == {"object": "A", "arrows": ["1_A", "1_B"]}


def test_fix_iso_shape(fix_iso):
    assert len(fix_iso.objects()) == 14
    assert fix_iso.frontier == {"<id_X,2>", "<id_Y,2>", "<u,2>", "<v,2>"}


def test_validate_fix_iso(fix_iso):
    report = validate_presentation(fix_iso)
    assert report.ok
    skipped = report.select("frontier", Status.SKIPPED_FRONTIER)
    assert [f.witness["object"] for f in skipped] == ["<id_X,2>", "<id_Y,2>", "<u,2>", "<v,2>"]


def test_compose(fix_one, fix_iso):
    assert fix_one.compose(Path("A")) == "1_A"
    assert fix_iso.compose(Path("X", ("u", "v"))) == "id_X"
    assert fix_iso.compose(Path("X", ("u",))) == "u"
    assert fix_iso.compose_arrows("v", "u", "v") == "v"


def test_compose_beyond_frontier(fix_iso):
    with pytest.raises(FrontierIncompleteError):
        fix_iso.identity("<u,2>")


def test_switchback(fix_iso):
    assert switchback(fix_iso, "u") == "<u,0>"
    assert switchback(fix_iso, "<u,1>", inverse=True) == "1_<u,0>"
    assert switchback(fix_iso, "X", inverse=True) is None


def test_emit_parse_round_trip(fix_iso):
    text = emit_presentation(fix_iso)
    again = parse_presentation(text)
    assert again == fix_iso
    assert emit_presentation(again) == text


def test_table_order_is_irrelevant():
    doc = json.loads(read_fixture("FIX-PAR.json"))
    shuffled = dict(doc, bcomp=list(reversed(doc["bcomp"])), arrows=list(reversed(doc["arrows"])))
    assert parse_presentation(json.dumps(shuffled)) == parse_presentation(json.dumps(doc))
    assert validate_presentation(parse_presentation(json.dumps(shuffled))).body() == \
        validate_presentation(parse_presentation(json.dumps(doc))).body()


def test_parse_syntax_error():
    with pytest.raises(PresentationError) as e:
        parse_presentation('{"objects": [', "broken.json")
    assert e.value.source == "broken.json"
    assert e.value.position.startswith("1:")


def test_parse_unknown_key():
    doc = json.loads(read_fixture("FIX-ONE.json"))
    doc["colour"] = "blue"
    with pytest.raises(PresentationError):
        parse_presentation(json.dumps(doc))


def test_parse_duplicate_object():
    doc = json.loads(read_fixture("FIX-ONE.json"))
    doc["objects"] = ["A", "A"]
    with pytest.raises(DuplicateIdError) as e:
        parse_presentation(json.dumps(doc))
    assert e.value.position == "/objects/1"


def test_parse_dangling_reference():
    doc = json.loads(read_fixture("FIX-ONE.json"))
    doc["J"] = {"1_A": "Z"}
    with pytest.raises(DanglingReferenceError) as e:
        parse_presentation(json.dumps(doc))
    assert e.value.position == "/J/1_A"


def test_truncate_loop(fix_loop):
    assert fix_loop.arrows()[:3] == ["1_<id_v,0>", "1_<id_v,1>", "1_<l,0>"]
    assert {"id_v", "l", "l.l"} <= set(fix_loop.arrows())
    assert "l.l.l" not in fix_loop.arrows()
    assert "v" in fix_loop.frontier
    assert fix_loop.compose_arrows("l", "l") == "l.l"


def test_restrict_window(fix_iso, walking_iso):
    O = from_category(walking_iso)
    shallow = truncate_oracle(O, 1, 1)
    assert (len(shallow.objects()), len(shallow.arrows())) == (10, 8)

    restricted = restrict_window(fix_iso, O, 1)
    # the level-1 identities switch back to level 2 and are dropped with it
    assert not [f for f in restricted.arrows() if f.startswith("1_<") and f.endswith(",1>")]
    assert restricted.objects() == shallow.objects()
    assert restricted.arrow_table == shallow.arrow_table
    assert restricted.J_table == shallow.J_table
    assert restricted.identity_table == shallow.identity_table
    assert restricted.bcomp_table == shallow.bcomp_table
    assert restricted.frontier == shallow.frontier
    assert validate_presentation(restricted).ok
