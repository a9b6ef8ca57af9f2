# coding: utf-8
#

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from foldcat import (BruteForceOutcome, Discreteness, EquivMode, Shape, brute_force_equiv, check_globular,
                     classify_shape, decide_equiv, discreteness, emit_presentation, extract_category,
                     extract_cert, free_strict_on_graph, from_category, is_isomorphic_category,
                     parse_presentation, restrict_window, truncate_oracle, validate_presentation, verify_cert)
from strategies import cyclic_groups, discrete_presentations, finite_categories, quivers

small = settings(max_examples=25, deadline=None)
sweep = settings(max_examples=50, deadline=None)

small_windows = st.one_of(
    quivers().map(lambda G: truncate_oracle(free_strict_on_graph(G), 1, 1)),
    finite_categories().map(lambda A: truncate_oracle(from_category(A), 1, 1)),
)
lazy_views = st.one_of(quivers().map(free_strict_on_graph), finite_categories().map(from_category))


@small
@given(quivers())
def test_truncated_free_category_is_valid(G):
    P = truncate_oracle(free_strict_on_graph(G), 1, 2)
    assert validate_presentation(P).ok
    assert check_globular(P).ok
    assert parse_presentation(emit_presentation(P)) == P


@small
@given(quivers())
def test_relation_is_symmetric_and_certified(G):
    P = truncate_oracle(free_strict_on_graph(G), 1, 2)
    relation = decide_equiv(P)
    for x, y in itertools.product(P.objects(), repeat=2):
        assert ((x, y) in relation) == ((y, x) in relation)
    for a, b in relation:
        if (a, b) not in relation.assumed:
            assert verify_cert(P, extract_cert(P, relation, a, b), (a, b)).ok


@sweep
@given(small_windows)
def test_relation_laws_on_small_windows(P):
    assert len(P.objects()) <= 20
    relation = decide_equiv(P)
    inner = [x for x in P.objects() if not P.is_frontier(x)]
    for x in inner:
        assert (x, x) in relation
    for x, y in itertools.product(P.objects(), repeat=2):
        assert ((x, y) in relation) == ((y, x) in relation)
    # frontier pairs stay in the relation optimistically, so transitivity is only scanned inside
    for x, y, z in itertools.product(inner, repeat=3):
        if (x, y) in relation and (y, z) in relation:
            assert (x, z) in relation


@sweep
@given(discrete_presentations())
def test_brute_force_matches_exact_relation(P):
    relation = decide_equiv(P, EquivMode.EXACT)
    assert set(relation) == {(x, x) for x in P.objects()}
    for a, b in itertools.product(P.objects(), repeat=2):
        found = brute_force_equiv(P, a, b, max_nodes=len(relation)).outcome == BruteForceOutcome.YES
        assert found == ((a, b) in relation)


@small
@given(cyclic_groups())
def test_extract_inverts_import(A):
    P = truncate_oracle(from_category(A), 1, 1)
    assert is_isomorphic_category(extract_category(P), A)


@settings(max_examples=20, deadline=None)
@given(finite_categories())
def test_category_towers_are_discrete(A):
    depth = 2
    P = truncate_oracle(from_category(A), depth, 1)
    assert classify_shape(P).shape == Shape.CATEGORY
    for f in P.arrows():
        verdicts = [discreteness(P, P.switchback(f), d) for d in range(depth + 1)]
        inside = verdicts.count(Discreteness.YES)
        assert verdicts == [Discreteness.YES] * inside + [Discreteness.FRONTIER] * (depth + 1 - inside)
    for f in A.morphisms:
        assert discreteness(P, P.switchback(f), depth - 1) == Discreteness.YES
    assert is_isomorphic_category(extract_category(P), A)


@small
@given(lazy_views, st.integers(0, 1))
def test_deeper_window_restricts_to_shallower(O, depth):
    shallow = truncate_oracle(O, depth, 1)
    restricted = restrict_window(truncate_oracle(O, depth + 1, 1), O, depth)
    assert restricted.objects() == shallow.objects()
    assert restricted.arrow_table == shallow.arrow_table
    assert restricted.J_table == shallow.J_table
    assert restricted.identity_table == shallow.identity_table
    assert restricted.bcomp_table == shallow.bcomp_table
