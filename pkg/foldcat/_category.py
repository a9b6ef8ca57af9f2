#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Strict categories, strict 2-categories and quivers used as construction inputs

Loading checks the documents against their schemas, then the identifier rules and the
strict laws. Composition tables are in diagrammatic order: (f, g) -> "f then g".
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from foldcat._presentation import _Refs, _unique
from foldcat._schema import CATEGORY_SCHEMA, GRAPH_SCHEMA, TWO_CATEGORY_SCHEMA, load_document
from foldcat._utils import canonical_json, sorted_ids
from foldcat.errors import CategoryLawError, DuplicateIdError, PresentationError

logger = logging.getLogger(__name__)

# generated tokens use "<", ",", and "1_<"; free paths use "." and "id_"
_SOURCE_TOKEN = re.compile(r"^[^<>,()\s]+$")


def check_token(token: str, source: Optional[str], where: str):
    """
    Raises:
        PresentationError: token could collide with generated identifiers
    """
    if not _SOURCE_TOKEN.match(token):
        raise PresentationError(f"identifier {token!r} may not contain whitespace or any of <>,()",
                                source, where)


@dataclass
class CategoryPresentation:
    objects: Tuple[str, ...]
    morphisms: Dict[str, Tuple[str, str]]
    identity: Dict[str, str]
    composition: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def dom(self, f: str) -> str:
        return self.morphisms[f][0]

    def cod(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, x: str, y: str) -> List[str]:
        return sorted_ids(f for f, (d, c) in self.morphisms.items() if d == x and c == y)

    def morphisms_from(self, x: str) -> List[str]:
        return sorted_ids(f for f, (d, _) in self.morphisms.items() if d == x)

    def compose(self, f: str, g: str) -> str:
        return self.composition[(f, g)]

    def is_identity(self, f: str) -> bool:
        return self.identity.get(self.dom(f)) == f

    def to_document(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": f, "dom": d, "cod": c} for f, (d, c) in self.morphisms.items()],
            "identity": dict(self.identity),
            "composition": [{"left": f, "right": g, "out": h}
                            for (f, g), h in sorted(self.composition.items())],
        }


def emit_category(C: CategoryPresentation) -> str:
    return canonical_json(C.to_document())


def check_category_laws(C: CategoryPresentation, what: str = "category"):
    """
    Typing, totality on composable pairs, unit and associativity laws, exactly

    Raises:
        CategoryLawError
    """
    for x in C.objects:
        i = C.identity.get(x)
        if i is None:
            raise CategoryLawError(f"{what}: object {x} has no identity")
        if C.morphisms[i] != (x, x):
            raise CategoryLawError(f"{what}: identity {i} of {x} is not an endomorphism of {x}")
    for f, (_, c) in C.morphisms.items():
        for g in C.morphisms_from(c):
            h = C.composition.get((f, g))
            if h is None:
                raise CategoryLawError(f"{what}: composite of {f} and {g} is missing")
            if C.morphisms[h] != (C.dom(f), C.cod(g)):
                raise CategoryLawError(f"{what}: composite {h} of {f} and {g} is ill-typed")
    for (f, g) in C.composition:
        if C.cod(f) != C.dom(g):
            raise CategoryLawError(f"{what}: composition entry for non-composable {f}, {g}")
    for f, (d, c) in C.morphisms.items():
        if C.compose(C.identity[d], f) != f or C.compose(f, C.identity[c]) != f:
            raise CategoryLawError(f"{what}: identities do not absorb {f}")
    for f, (_, c) in C.morphisms.items():
        for g in C.morphisms_from(c):
            for h in C.morphisms_from(C.cod(g)):
                if C.compose(C.compose(f, g), h) != C.compose(f, C.compose(g, h)):
                    raise CategoryLawError(f"{what}: composition of {f}, {g}, {h} is not associative")


def _triples(doc_entries, refs: _Refs, where: str, source: Optional[str]) -> Dict[Tuple[str, str], str]:
    table = {}
    for i, e in enumerate(doc_entries):
        at = f"{where}/{i}"
        key = (refs.arr(e["left"], at + "/left"), refs.arr(e["right"], at + "/right"))
        if key in table:
            raise DuplicateIdError(f"duplicate composition entry {key}", source, at)
        table[key] = refs.arr(e["out"], at + "/out")
    return table


def _typed(entries, refs: _Refs, where: str, keys=("dom", "cod")) -> Dict[str, Tuple[str, str]]:
    return {e["id"]: (refs.obj(e[keys[0]], f"{where}/{i}/{keys[0]}"), refs.obj(e[keys[1]], f"{where}/{i}/{keys[1]}"))
            for i, e in enumerate(entries)}


def _category_from(doc: dict, source: Optional[str]) -> CategoryPresentation:
    objects = _unique(doc["objects"], "object", "/objects", source)
    morphisms = _unique([m["id"] for m in doc["morphisms"]], "morphism", "/morphisms", source)
    clash = objects & morphisms
    if clash:
        raise DuplicateIdError(f"identifiers used as object and morphism: {sorted(clash)}", source, "/morphisms")
    for i, x in enumerate(doc["objects"]):
        check_token(x, source, f"/objects/{i}")
    for i, m in enumerate(doc["morphisms"]):
        check_token(m["id"], source, f"/morphisms/{i}/id")
    refs = _Refs(objects, morphisms, source)
    identity = {refs.obj(x, "/identity"): refs.arr(f, f"/identity/{x}") for x, f in doc["identity"].items()}
    return CategoryPresentation(tuple(doc["objects"]), _typed(doc["morphisms"], refs, "/morphisms"), identity,
                                _triples(doc["composition"], refs, "/composition", source))


def parse_category(text: str, source: Optional[str] = None) -> CategoryPresentation:
    """
    Raises:
        PresentationError, DuplicateIdError, DanglingReferenceError: malformed document
        CategoryLawError: a strict law fails
    """
    C = _category_from(load_document(text, CATEGORY_SCHEMA, source), source)
    check_category_laws(C)
    logger.debug("parsed category with %d objects and %d morphisms from %s",
                 len(C.objects), len(C.morphisms), source or "<text>")
    return C


@dataclass
class TwoCategoryPresentation:
    objects: Tuple[str, ...]
    one_cells: Dict[str, Tuple[str, str]]
    one_identity: Dict[str, str]
    one_composition: Dict[Tuple[str, str], str]
    two_cells: Dict[str, Tuple[str, str]]
    two_identity: Dict[str, str]
    vertical: Dict[Tuple[str, str], str]
    horizontal: Dict[Tuple[str, str], str]

    def underlying(self) -> CategoryPresentation:
        """ objects and 1-cells """
        return CategoryPresentation(self.objects, self.one_cells, self.one_identity, self.one_composition)

    def vertical_category(self) -> CategoryPresentation:
        """ 1-cells as objects, 2-cells with vertical composition """
        return CategoryPresentation(tuple(self.one_cells), self.two_cells, self.two_identity, self.vertical)

    def boundary(self, phi: str) -> Tuple[str, str]:
        """ 0-cell source and target of a 2-cell """
        a = self.two_cells[phi][0]
        return self.one_cells[a]

    def horizontal_pairs(self) -> Iterator[Tuple[str, str]]:
        for phi in sorted_ids(self.two_cells):
            for psi in sorted_ids(self.two_cells):
                if self.boundary(phi)[1] == self.boundary(psi)[0]:
                    yield phi, psi


def check_two_category_laws(T: TwoCategoryPresentation):
    """
    Raises:
        CategoryLawError
    """
    check_category_laws(T.underlying(), "1-cells")
    check_category_laws(T.vertical_category(), "vertical composition")
    for (phi, psi) in T.horizontal:
        if T.boundary(phi)[1] != T.boundary(psi)[0]:
            raise CategoryLawError(f"horizontal entry for non-composable {phi}, {psi}")
    for phi, psi in T.horizontal_pairs():
        out = T.horizontal.get((phi, psi))
        if out is None:
            raise CategoryLawError(f"horizontal composite of {phi} and {psi} is missing")
        (a, a2), (b, b2) = T.two_cells[phi], T.two_cells[psi]
        expected = (T.one_composition[(a, b)], T.one_composition[(a2, b2)])
        if T.two_cells[out] != expected:
            raise CategoryLawError(f"horizontal composite {out} of {phi} and {psi} is ill-typed")
    for a, b in T.one_composition:
        ia, ib = T.two_identity[a], T.two_identity[b]
        if T.horizontal[(ia, ib)] != T.two_identity[T.one_composition[(a, b)]]:
            raise CategoryLawError(f"horizontal composite of identities on {a}, {b} is not an identity")
    for phi in T.two_cells:
        x, y = T.boundary(phi)
        unit_x = T.two_identity[T.one_identity[x]]
        unit_y = T.two_identity[T.one_identity[y]]
        if T.horizontal[(unit_x, phi)] != phi or T.horizontal[(phi, unit_y)] != phi:
            raise CategoryLawError(f"identity 2-cells do not absorb {phi} horizontally")
    pairs = list(T.horizontal_pairs())
    for phi, psi in pairs:
        for chi in sorted_ids(T.two_cells):
            if T.boundary(psi)[1] != T.boundary(chi)[0]:
                continue
            left = T.horizontal[(T.horizontal[(phi, psi)], chi)]
            if left != T.horizontal[(phi, T.horizontal[(psi, chi)])]:
                raise CategoryLawError(f"horizontal composition of {phi}, {psi}, {chi} is not associative")
    for (phi, phi2), first in T.vertical.items():
        for (psi, psi2), second in T.vertical.items():
            if (phi, psi) not in T.horizontal:
                continue
            if T.horizontal[(first, second)] != T.vertical[(T.horizontal[(phi, psi)], T.horizontal[(phi2, psi2)])]:
                raise CategoryLawError(f"interchange fails for {phi};{phi2} and {psi};{psi2}")


def parse_two_category(text: str, source: Optional[str] = None) -> TwoCategoryPresentation:
    """
    Raises:
        PresentationError, DuplicateIdError, DanglingReferenceError: malformed document
        CategoryLawError: a strict law fails
    """
    doc = load_document(text, TWO_CATEGORY_SCHEMA, source)
    objects = _unique(doc["objects"], "object", "/objects", source)
    ones = _unique([a["id"] for a in doc["one_cells"]], "1-cell", "/one_cells", source)
    twos = _unique([p["id"] for p in doc["two_cells"]], "2-cell", "/two_cells", source)
    for what, clash in (("object and 1-cell", objects & ones), ("object and 2-cell", objects & twos),
                        ("1-cell and 2-cell", ones & twos)):
        if clash:
            raise DuplicateIdError(f"identifiers used as {what}: {sorted(clash)}", source, "/two_cells")
    for i, x in enumerate(doc["objects"]):
        check_token(x, source, f"/objects/{i}")
    for key in ("one_cells", "two_cells"):
        for i, e in enumerate(doc[key]):
            check_token(e["id"], source, f"/{key}/{i}/id")

    one_refs = _Refs(objects, ones, source)
    cell_refs = _Refs(ones, twos, source)
    T = TwoCategoryPresentation(
        objects=tuple(doc["objects"]),
        one_cells=_typed(doc["one_cells"], one_refs, "/one_cells"),
        one_identity={one_refs.obj(x, "/one_identity"): one_refs.arr(a, f"/one_identity/{x}")
                      for x, a in doc["one_identity"].items()},
        one_composition=_triples(doc["one_composition"], one_refs, "/one_composition", source),
        two_cells=_typed(doc["two_cells"], cell_refs, "/two_cells", keys=("source", "target")),
        two_identity={cell_refs.obj(a, "/two_identity"): cell_refs.arr(p, f"/two_identity/{a}")
                      for a, p in doc["two_identity"].items()},
        vertical=_triples(doc["vertical"], cell_refs, "/vertical", source),
        horizontal=_triples(doc["horizontal"], cell_refs, "/horizontal", source))
    for phi, (a, b) in T.two_cells.items():
        if T.one_cells[a] != T.one_cells[b]:
            raise CategoryLawError(f"2-cell {phi} joins non-parallel 1-cells {a} and {b}")
    check_two_category_laws(T)
    logger.debug("parsed 2-category with %d 1-cells and %d 2-cells from %s",
                 len(T.one_cells), len(T.two_cells), source or "<text>")
    return T


@dataclass
class Quiver:
    vertices: Tuple[str, ...]
    edges: Dict[str, Tuple[str, str]]


def parse_graph(text: str, source: Optional[str] = None) -> Quiver:
    """
    Edge identifiers may not contain "." nor start with "id_", those spell free paths.

    Raises:
        PresentationError, DuplicateIdError, DanglingReferenceError
    """
    doc = load_document(text, GRAPH_SCHEMA, source)
    vertices = _unique(doc["vertices"], "vertex", "/vertices", source)
    edges = _unique([e["id"] for e in doc["edges"]], "edge", "/edges", source)
    for i, v in enumerate(doc["vertices"]):
        check_token(v, source, f"/vertices/{i}")
    for i, e in enumerate(doc["edges"]):
        where = f"/edges/{i}/id"
        check_token(e["id"], source, where)
        if "." in e["id"] or e["id"].startswith("id_"):
            raise PresentationError(f"edge {e['id']!r} may not contain '.' or start with 'id_'", source, where)
    refs = _Refs(vertices, edges, source)
    return Quiver(tuple(doc["vertices"]), _typed(doc["edges"], refs, "/edges", keys=("src", "dst")))


class FreeCategory:
    """
    Free category on a quiver, generated lazily. Morphisms are path tokens
    "e1.e2.e3", the empty path at v is "id_v".
    """

    def __init__(self, G: Quiver):
        self.G = G
        self._out: Dict[str, List[str]] = {v: [] for v in G.vertices}
        for e, (s, _) in G.edges.items():
            self._out[s].append(e)
        for v in self._out:
            self._out[v] = sorted_ids(self._out[v])

    @staticmethod
    def empty(v: str) -> str:
        return "id_" + v

    def edges_of(self, p: str) -> Tuple[str, ...]:
        if p.startswith("id_"):
            return ()
        return tuple(p.split("."))

    def has_morphism(self, p: str) -> bool:
        if p.startswith("id_"):
            return p[3:] in self._out
        edges = self.edges_of(p)
        if not all(e in self.G.edges for e in edges):
            return False
        return all(self.G.edges[e][1] == self.G.edges[e2][0] for e, e2 in zip(edges, edges[1:]))

    def length(self, p: str) -> int:
        return len(self.edges_of(p))

    def dom(self, p: str) -> str:
        if p.startswith("id_"):
            return p[3:]
        return self.G.edges[self.edges_of(p)[0]][0]

    def cod(self, p: str) -> str:
        if p.startswith("id_"):
            return p[3:]
        return self.G.edges[self.edges_of(p)[-1]][1]

    def compose(self, p: str, q: str) -> str:
        edges = self.edges_of(p) + self.edges_of(q)
        return ".".join(edges) if edges else p

    def paths_from(self, v: str, max_length: int) -> List[str]:
        """ all paths out of v of length <= max_length, lexicographic """
        out = [self.empty(v)]
        frontier = [((), v)]
        for _ in range(max_length):
            frontier = [(edges + (e,), self.G.edges[e][1]) for edges, end in frontier for e in self._out[end]]
            out.extend(".".join(edges) for edges, _ in frontier)
        return sorted_ids(out)


def is_isomorphic_category(A: CategoryPresentation, B: CategoryPresentation) -> bool:
    """ brute-force isomorphism search, meant for small categories """
    if len(A.objects) != len(B.objects) or len(A.morphisms) != len(B.morphisms):
        return False
    morphisms = sorted_ids(A.morphisms)
    for image in itertools.permutations(B.objects):
        on_objects = dict(zip(A.objects, image))
        if all(len(A.hom(x, y)) == len(B.hom(on_objects[x], on_objects[y]))
               for x in A.objects for y in A.objects):
            if _match_morphisms(A, B, on_objects, morphisms, {}, set()):
                return True
    return False


def _match_morphisms(A, B, on_objects, todo, assigned, used) -> bool:
    if len(assigned) == len(todo):
        return all(assigned[A.compose(f, g)] == B.compose(assigned[f], assigned[g]) for (f, g) in A.composition)
    f = todo[len(assigned)]
    d, c = A.morphisms[f]
    for g in B.hom(on_objects[d], on_objects[c]):
        if g in used or A.is_identity(f) != B.is_identity(g):
            continue
        assigned[f] = g
        used.add(g)
        if _match_morphisms(A, B, on_objects, todo, assigned, used):
            return True
        del assigned[f]
        used.discard(g)
    return False
