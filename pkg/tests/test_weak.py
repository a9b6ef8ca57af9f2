# coding: utf-8
#

import pytest

from foldcat import (MissingEntryError, Mutation, MutationKind, Path, PreconditionError, Status, ThetaKey,
                     check_coherence, contract_path, emit_presentation, mu_apply, mu_object, mutate_presentation,
                     parse_presentation, theta_lookup, validate_mu)

UV = ThetaKey(Path("X", ("u", "v")), 0, 2)


def test_contract_path(fix_iso):
    assert contract_path(fix_iso, UV) == Path("X", ("id_X",))
    assert contract_path(fix_iso, ThetaKey(Path("X", ("u", "v")), 1, 1)) == Path("X", ("u", "id_Y", "v"))
    with pytest.raises(PreconditionError):
        contract_path(fix_iso, ThetaKey(Path("X", ("u",)), 1, 3))


def test_theta_reflexive_fallback(fix_iso):
    cert = theta_lookup(fix_iso, None, UV)
    assert cert.pair == ("<id_X,0>", "<id_X,0>")


def test_mu(fix_iso):
    assert mu_object(fix_iso, None, ("X",)) == "id_X"
    assert mu_object(fix_iso, None, ("u", "v")) == "id_X"
    assert mu_apply(fix_iso, None, 0, ("id_X",)) == "1_<id_X,0>"
    assert mu_apply(fix_iso, None, 1, ("1_<u,0>",)) == "1_<u,0>"
    assert mu_apply(fix_iso, None, 2, ("1_<u,0>", "1_<v,0>")) == "1_<id_X,0>"
    with pytest.raises(PreconditionError):
        mu_apply(fix_iso, None, 2, ("1_<u,0>",))
    with pytest.raises(MissingEntryError) as e:
        mu_apply(fix_iso, None, 2, ("u", "v"))
    assert e.value.entry == ("u", "v")


def test_mu_from_hcomp_table(fix_2cat):
    W = fix_2cat.weak_or_default()
    (x, y), out = sorted(W.hcomp.items())[0]
    assert mu_apply(fix_2cat, None, 2, (x, y)) == out


def test_validate_mu(fix_iso, fix_2cat):
    for P in (fix_iso, fix_2cat):
        report = validate_mu(P, max_arity=2)
        assert report.failures() == []
        assert report.select("mu-coverage")


def test_check_coherence(fix_iso, fix_2cat):
    for P in (fix_iso, fix_2cat):
        report = check_coherence(P, max_path_len=2, max_arity=2)
        assert report.ok
        assert {f.check_id for f in report.select(status=Status.PASS)} == {"coherence-a1", "coherence-a2",
                                                                          "coherence-b"}


def test_check_coherence_on_threads(fix_iso):
    serial = check_coherence(fix_iso, max_path_len=2, max_arity=2)
    threaded = check_coherence(fix_iso, max_path_len=2, max_arity=2, workers=4)
    assert serial.body() == threaded.body()


@pytest.mark.parametrize("name, counts", [
    ("FIX-ISO", {"a1": 12212, "a2": 10528, "b": 296}),
    ("FIX-2CAT", {"a1": 36179, "a2": 31124, "b": 1350}),
])
def test_check_coherence_long_paths(fixtures, name, counts):
    report = check_coherence(fixtures[name], max_path_len=5)
    assert report.ok
    for axiom, instances in counts.items():
        [summary] = report.select(f"coherence-{axiom}", Status.PASS)
        assert summary.witness["instances"] == instances
        skipped = sum(f.witness["count"] for f in report.select(f"coherence-{axiom}") if f.status != Status.PASS)
        assert summary.witness["checked"] + skipped == instances
    # only the loops on level-1 tower objects reach the frontier, and they carry no b cells
    assert not [f for f in report.select("coherence-b") if f.status != Status.PASS]
    assert {f.witness["n"] for f in report.select("coherence-a1", Status.SKIPPED_FRONTIER)} == {1, 2, 3, 4, 5}


def test_max_arity_bounds_naturality(fix_iso):
    report = check_coherence(fix_iso, axioms=["b"], max_path_len=3, max_arity=1)
    [summary] = report.select("coherence-b", Status.PASS)
    assert summary.witness["instances"] == 24


def test_shared_caches_under_workers(fix_2cat):
    serial = check_coherence(fix_2cat, max_path_len=3, max_arity=2)
    fresh = parse_presentation(emit_presentation(fix_2cat))
    threaded = check_coherence(fresh, max_path_len=3, max_arity=2, workers=8)
    assert serial.body() == threaded.body()
    assert fresh.arrows_from("<a,0>") == ["alpha", "i_a"]


def test_unknown_axiom(fix_iso):
    with pytest.raises(PreconditionError):
        check_coherence(fix_iso, axioms=["a1", "c"])


def test_withheld_theta_is_skipped(fix_iso):
    P = mutate_presentation(fix_iso, Mutation(MutationKind.DROP_THETA, UV))
    report = check_coherence(P, axioms=["a1"], max_path_len=2)
    assert report.ok
    assert report.select("coherence-a1", Status.SKIPPED_MISSING_THETA)


def test_wrong_theta_fails(fix_iso):
    P = mutate_presentation(fix_iso, Mutation(MutationKind.REPLACE_THETA, UV, "<id_Y,0>"))
    report = check_coherence(P, axioms=["a1"], max_path_len=2)
    assert not report.ok
    assert "theta-invalid" in {f.witness["reason"] for f in report.failures("coherence-a1")}
