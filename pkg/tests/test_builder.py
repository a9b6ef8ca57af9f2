# coding: utf-8
#

import pytest

from foldcat import (CertificateBuilder, Link, Path, PreconditionError, cancel_cert, chain_cert, decide_equiv,
                     extract_cert, lemma_a_cert, refl_cert, verify_cert)


@pytest.fixture
def iso_link(fix_iso) -> Link:
    return Link.from_cert(extract_cert(fix_iso, decide_equiv(fix_iso), "X", "Y"))


def test_link_from_cert(iso_link: Link):
    assert (iso_link.fwd, iso_link.bwd) == ("u", "v")
    assert iso_link.cert0.pair == ("<id_X,0>", "<id_X,0>")
    assert iso_link.swapped().cert0.pair == ("<id_Y,0>", "<id_Y,0>")


def test_chain_single_link(fix_iso, iso_link):
    cert = chain_cert(fix_iso, None, [iso_link])
    assert cert.pair == ("X", "Y")
    assert verify_cert(fix_iso, cert, ("X", "Y")).ok


def test_chain_there_and_back(fix_iso, iso_link):
    cert = chain_cert(fix_iso, None, [iso_link, iso_link.swapped()])
    assert cert.pair == ("X", "X")
    assert (cert.root_node.fwd, cert.root_node.bwd) == ("id_X", "id_X")
    assert verify_cert(fix_iso, cert, ("X", "X")).ok


def test_chain_empty(fix_iso):
    assert chain_cert(fix_iso, None, [], base="Y").pair == ("Y", "Y")
    with pytest.raises(PreconditionError):
        chain_cert(fix_iso, None, [])


def test_chain_must_connect(fix_iso, iso_link):
    with pytest.raises(PreconditionError):
        chain_cert(fix_iso, None, [iso_link, iso_link])


def test_lemma_a(fix_iso):
    fs = Path("X", ("u", "v"))
    certs = [refl_cert(fix_iso, "<u,0>"), refl_cert(fix_iso, "<v,0>")]
    cert = lemma_a_cert(fix_iso, None, fs, fs, certs)
    assert cert.pair == ("<id_X,0>", "<id_X,0>")
    assert verify_cert(fix_iso, cert).ok

    single = lemma_a_cert(fix_iso, None, Path("X", ("u",)), Path("X", ("u",)), certs[:1])
    assert single is certs[0]


def test_lemma_a_preconditions(fix_iso):
    fs = Path("X", ("u", "v"))
    with pytest.raises(PreconditionError):
        lemma_a_cert(fix_iso, None, fs, Path("X", ("u",)), [refl_cert(fix_iso, "<u,0>")])


def test_cancel_left(fix_iso, iso_link):
    premise = refl_cert(fix_iso, "<id_X,0>")
    cert = cancel_cert(fix_iso, None, iso_link, "v", "id_X", premise)
    assert cert.pair == ("<v,0>", "<v,0>")
    assert verify_cert(fix_iso, cert).ok


def test_cancel_right(fix_iso, iso_link):
    # f = v: Y -> X, g = id_Y: Y -> Y, J(v u) = J(id_Y)
    premise = refl_cert(fix_iso, "<id_Y,0>")
    cert = cancel_cert(fix_iso, None, iso_link, "v", "id_Y", premise, side="right")
    assert cert.pair == ("<v,0>", "<v,0>")
    assert verify_cert(fix_iso, cert).ok


def test_cancel_rejects_bad_typing(fix_iso, iso_link):
    premise = refl_cert(fix_iso, "<id_X,0>")
    with pytest.raises(PreconditionError):
        cancel_cert(fix_iso, None, iso_link, "u", "id_X", premise)
    with pytest.raises(PreconditionError):
        cancel_cert(fix_iso, None, iso_link, "v", "id_X", premise, side="middle")


def test_builder_refl_and_sym(fix_iso, iso_link):
    builder = CertificateBuilder(fix_iso)
    assert builder.refl("X") == ("X", "X")
    assert builder.pool[("X", "X")] == ("id_X", "id_X")
    builder.import_cert(extract_cert(fix_iso, decide_equiv(fix_iso), "X", "Y"))
    assert builder.sym(("X", "Y")) == ("Y", "X")
    assert builder.pool[("Y", "X")] == ("v", "u")
    assert verify_cert(fix_iso, builder.certificate(("Y", "X")), ("Y", "X")).ok


@pytest.fixture
def cell_link(fix_2cat) -> Link:
    return Link.from_cert(extract_cert(fix_2cat, decide_equiv(fix_2cat), "<a,0>", "<a2,0>"))


def test_cell_link(cell_link: Link):
    assert (cell_link.fwd, cell_link.bwd) == ("alpha", "beta")
    assert cell_link.cert0.pair == ("<i_a,0>", "<i_a,0>")
    assert cell_link.cert1.pair == ("<i_a2,0>", "<i_a2,0>")


def test_lemma_a_whiskered_cell(fix_2cat):
    relation = decide_equiv(fix_2cat)
    certs = [extract_cert(fix_2cat, relation, "<a,0>", "<a2,0>"), refl_cert(fix_2cat, "<b,0>")]
    cert = lemma_a_cert(fix_2cat, None, Path("x", ("a", "b")), Path("x", ("a2", "b")), certs)
    assert cert.pair == ("<ab,0>", "<a2b,0>")
    assert len(cert) == 7
    assert verify_cert(fix_2cat, cert, ("<ab,0>", "<a2b,0>")).ok


def test_chain_on_cells(fix_2cat, cell_link):
    cert = chain_cert(fix_2cat, None, [cell_link])
    assert cert.pair == ("<a,0>", "<a2,0>")
    assert verify_cert(fix_2cat, cert, ("<a,0>", "<a2,0>")).ok

    back = chain_cert(fix_2cat, None, [cell_link, cell_link.swapped()])
    assert back.pair == ("<a,0>", "<a,0>")
    assert (back.root_node.fwd, back.root_node.bwd) == ("i_a", "i_a")
    assert verify_cert(fix_2cat, back, ("<a,0>", "<a,0>")).ok


def test_cancel_on_cells(fix_2cat, cell_link):
    # f = beta: <a2,0> -> <a,0>, g = i_a, J(alpha beta) = J(i_a)
    left = cancel_cert(fix_2cat, None, cell_link, "beta", "i_a", refl_cert(fix_2cat, "<i_a,0>"))
    assert left.pair == ("<beta,0>", "<beta,0>")
    assert verify_cert(fix_2cat, left).ok

    right = cancel_cert(fix_2cat, None, cell_link, "beta", "i_a2", refl_cert(fix_2cat, "<i_a2,0>"), side="right")
    assert right.pair == ("<beta,0>", "<beta,0>")
    assert verify_cert(fix_2cat, right).ok


def test_cancel_identity_against_link(fix_iso, iso_link):
    # f = id_Y, g = u: J(u id_Y) = J(u), cancelling u leaves J(id_Y) ~ J(v u)
    cert = cancel_cert(fix_iso, None, iso_link, "id_Y", "u", refl_cert(fix_iso, "<u,0>"))
    assert cert.pair == ("<id_Y,0>", "<id_Y,0>")
    assert verify_cert(fix_iso, cert).ok
