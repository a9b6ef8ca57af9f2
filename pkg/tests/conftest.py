# coding: utf-8
#

import logging
import pathlib

import pytest

import foldcat
from foldcat import (from_category, free_strict_on_graph, from_strict_2category, parse_category, parse_graph,
                     parse_presentation, parse_two_category, truncate_oracle)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
GOLDEN = pathlib.Path(__file__).parent / "golden"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(autouse=True)
def debug_logging(monkeypatch):
    logging.basicConfig(level=logging.DEBUG)
    monkeypatch.delenv("FCAT_BUDGET_STATES", raising=False)


@pytest.fixture
def fix_one() -> foldcat.Presentation:
    return parse_presentation(read_fixture("FIX-ONE.json"), "FIX-ONE.json")


@pytest.fixture
def fix_par() -> foldcat.Presentation:
    return parse_presentation(read_fixture("FIX-PAR.json"), "FIX-PAR.json")


@pytest.fixture
def walking_iso() -> foldcat.CategoryPresentation:
    return parse_category(read_fixture("walking_iso.category.json"))


@pytest.fixture
def fix_iso(walking_iso) -> foldcat.Presentation:
    return truncate_oracle(from_category(walking_iso), 2, 1)


@pytest.fixture
def two_cat() -> foldcat.TwoCategoryPresentation:
    return parse_two_category(read_fixture("fix2cat.two-category.json"))


@pytest.fixture
def fix_2cat(two_cat) -> foldcat.Presentation:
    return truncate_oracle(from_strict_2category(two_cat), 2, 1)


@pytest.fixture
def fix_2cat_identity() -> foldcat.Presentation:
    T = parse_two_category(read_fixture("fix2cat-identity.two-category.json"))
    return truncate_oracle(from_strict_2category(T), 2, 1)


@pytest.fixture
def fix_loop() -> foldcat.Presentation:
    return truncate_oracle(free_strict_on_graph(parse_graph(read_fixture("loop.graph.json"))), 2, 2)


@pytest.fixture
def fixtures(fix_iso, fix_2cat):
    return {"FIX-ISO": fix_iso, "FIX-2CAT": fix_2cat}
