# coding: utf-8
#

import json

import pytest

from conftest import read_fixture
from foldcat import (MUTATION_CATALOGUE, CategoryLawError, FreeCategory, Mutation, MutationError, MutationKind,
                     PresentationError, ShapeError, check_coherence, check_globular, emit_category,
                     extract_category, from_category, is_isomorphic_category, mutate_presentation,
                     parse_category, parse_graph, parse_two_category, validate_mu, validate_presentation)
from foldcat.constructions import tower, tower_identity


def test_tower_tokens():
    assert tower("f", 2) == "<f,2>"
    assert tower_identity("f", 0) == "1_<f,0>"


def test_category_towers(walking_iso):
    O = from_category(walking_iso)
    assert O.switchback("u") == "<u,0>"
    assert O.switchback("1_<u,0>") == "<u,1>"
    assert O.switchback_inverse("<u,1>") == "1_<u,0>"
    assert O.switchback_inverse("X") is None
    assert O.has_object("<u,5>")
    assert O.identity("<u,5>") == "1_<u,5>"
    assert not O.has_object("<w,0>")


def test_extract_round_trip(walking_iso, fix_iso):
    A = extract_category(fix_iso)
    assert sorted(A.objects) == ["X", "Y"]
    assert is_isomorphic_category(A, walking_iso)
    assert is_isomorphic_category(parse_category(emit_category(A)), walking_iso)


def test_extract_two_category_with_identity_cells(fix_2cat_identity):
    T = parse_two_category(read_fixture("fix2cat-identity.two-category.json"))
    assert is_isomorphic_category(extract_category(fix_2cat_identity), T.underlying())


def test_extract_rejects_other_shapes(fix_2cat, fix_par):
    with pytest.raises(ShapeError):
        extract_category(fix_2cat)
    with pytest.raises(ShapeError):
        extract_category(fix_par)


def test_is_isomorphic_category(walking_iso):
    doc = json.loads(read_fixture("walking_iso.category.json"))
    doc["objects"] = ["Q", "P"]
    text = json.dumps(doc).replace('"X"', '"Q"').replace('"Y"', '"P"')
    assert is_isomorphic_category(walking_iso, parse_category(text))

    arrow = parse_category(json.dumps({
        "objects": ["X", "Y"],
        "morphisms": [{"id": "id_X", "dom": "X", "cod": "X"}, {"id": "id_Y", "dom": "Y", "cod": "Y"},
                      {"id": "u", "dom": "X", "cod": "Y"}],
        "identity": {"X": "id_X", "Y": "id_Y"},
        "composition": [{"left": "id_X", "right": "id_X", "out": "id_X"},
                        {"left": "id_X", "right": "u", "out": "u"},
                        {"left": "u", "right": "id_Y", "out": "u"},
                        {"left": "id_Y", "right": "id_Y", "out": "id_Y"}],
    }))
    assert not is_isomorphic_category(walking_iso, arrow)


def test_category_law_errors():
    doc = json.loads(read_fixture("walking_iso.category.json"))
    doc["composition"][3]["out"] = "id_Y"
    with pytest.raises(CategoryLawError):
        parse_category(json.dumps(doc))

    doc = json.loads(read_fixture("walking_iso.category.json"))
    del doc["composition"][0]
    with pytest.raises(CategoryLawError):
        parse_category(json.dumps(doc))


def test_reserved_characters():
    doc = json.loads(read_fixture("walking_iso.category.json"))
    text = json.dumps(doc).replace('"X"', '"<X>"')
    with pytest.raises(PresentationError):
        parse_category(text)
    with pytest.raises(PresentationError):
        parse_graph(json.dumps({"vertices": ["v"], "edges": [{"id": "l.l", "src": "v", "dst": "v"}]}))


def test_two_cell_between_non_parallel_cells():
    doc = json.loads(read_fixture("fix2cat-identity.two-category.json"))
    doc["two_cells"][2]["target"] = "id_x"
    with pytest.raises(CategoryLawError):
        parse_two_category(json.dumps(doc))


def test_free_category():
    F = FreeCategory(parse_graph(read_fixture("loop.graph.json")))
    assert set(F.paths_from("v", 2)) == {"id_v", "l", "l.l"}
    assert F.compose("l", "l.l") == "l.l.l"
    assert F.compose("id_v", "l") == "l"
    assert F.compose("id_v", "id_v") == "id_v"
    assert F.length("l.l") == 2
    assert F.has_morphism("l.l.l")
    assert not F.has_morphism("l.m")


def _detected(P) -> bool:
    if not validate_presentation(P).ok or not check_globular(P).ok:
        return True
    if not validate_mu(P, max_arity=2).ok:
        return True
    return not check_coherence(P, max_path_len=2, max_arity=2).ok


def test_fixtures_are_clean(fixtures):
    for name, P in fixtures.items():
        assert not _detected(P), name


@pytest.mark.parametrize("name,mutation", MUTATION_CATALOGUE, ids=[str(m) for _, m in MUTATION_CATALOGUE])
def test_mutant_is_detected(fixtures, name, mutation):
    assert _detected(mutate_presentation(fixtures[name], mutation))


def test_mutation_errors(fix_iso):
    with pytest.raises(MutationError):
        mutate_presentation(fix_iso, Mutation(MutationKind.RETARGET_J, "w", "<u,0>"))
    with pytest.raises(MutationError):
        mutate_presentation(fix_iso, Mutation(MutationKind.REWIRE_HCOMP, ("u", "v"), "u"))
    with pytest.raises(MutationError):
        mutate_presentation(fix_iso, Mutation(MutationKind.DROP_THETA, "u"))
