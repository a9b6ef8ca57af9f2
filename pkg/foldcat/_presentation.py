#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Finite presentations of pre-folded categories

A Presentation stores objects, typed arrows, identities, binary composition (bcomp),
explicit n-ary overrides, the switchback J and the frontier of a truncation.
Composition of a path is the left fold of bcomp unless an override names the path.
"""

from __future__ import annotations

import collections
import dataclasses
import logging
import threading
from typing import Dict, Iterable, List, Optional, Tuple

from foldcat._proto import Path, RationalCert, Report, Status, ThetaKey, WeakStructure
from foldcat._schema import PRESENTATION_SCHEMA, load_document
from foldcat._utils import StateBudget, canonical_json, sorted_ids
from foldcat._view import FiniteView, GenerativeView
from foldcat.errors import (DanglingReferenceError, DuplicateIdError,
                            FoldError, FrontierIncompleteError, MissingEntryError, PresentationError)

logger = logging.getLogger(__name__)

# compose caches are filled from coherence worker threads
_CACHE_LOCK = threading.Lock()


class Presentation(FiniteView):
    def __init__(self,
                 objects: Iterable[str],
                 arrows: Dict[str, Tuple[str, str]],
                 identity: Dict[str, str],
                 bcomp: Dict[Tuple[str, str], str],
                 J: Dict[str, str],
                 frontier: Iterable[str] = (),
                 overrides: Optional[Dict[Path, str]] = None,
                 weak: Optional[WeakStructure] = None):
        self.object_decl = tuple(objects)
        self._objects = frozenset(self.object_decl)
        self.arrow_table = dict(arrows)
        self.identity_table = dict(identity)
        self.bcomp_table = dict(bcomp)
        self.J_table = dict(J)
        self.frontier_decl = tuple(frontier)
        self._frontier = frozenset(self.frontier_decl)
        self.overrides = dict(overrides or {})
        self.weak = weak
        self._J_inverse: Dict[str, str] = {}
        for f in sorted_ids(self.J_table):
            self._J_inverse.setdefault(self.J_table[f], f)
        self._compose_cache: Dict[Path, str] = {}

    def __repr__(self):
        return "Presentation(objects={}, arrows={}, frontier={})".format(
            len(self._objects), len(self.arrow_table), len(self._frontier))

    # FiniteView
    def objects(self) -> List[str]:
        return sorted_ids(self._objects)

    def arrows(self) -> List[str]:
        return sorted_ids(self.arrow_table)

    @property
    def frontier(self):
        return self._frontier

    def has_object(self, x) -> bool:
        return x in self._objects

    def has_arrow(self, f) -> bool:
        return f in self.arrow_table

    def dom(self, f):
        return self.arrow_table[f][0]

    def cod(self, f):
        return self.arrow_table[f][1]

    def switchback(self, f):
        """
        Raises:
            FrontierIncompleteError: J of an arrow at the frontier is not recorded
            MissingEntryError: J is not total
        """
        try:
            return self.J_table[f]
        except KeyError:
            pass
        if self.touches_frontier(self.dom(f), self.cod(f)):
            raise FrontierIncompleteError(f"J({f}) lies beyond the frontier")
        raise MissingEntryError(f"J({f}) is not defined", f)

    def switchback_inverse(self, x) -> Optional[str]:
        return self._J_inverse.get(x)

    def identity(self, x):
        try:
            return self.identity_table[x]
        except KeyError:
            pass
        if x in self._frontier:
            raise FrontierIncompleteError(f"identity of frontier object {x} was cut")
        raise MissingEntryError(f"no identity for object {x}", x)

    def bcomp(self, f, g):
        try:
            return self.bcomp_table[(f, g)]
        except KeyError:
            pass
        if self.touches_frontier(self.dom(f), self.cod(f), self.cod(g)):
            raise FrontierIncompleteError(f"composite of {f},{g} lies beyond the frontier")
        raise MissingEntryError(f"no composite for ({f}, {g})", (f, g))

    def compose(self, path: Path):
        cached = self._compose_cache.get(path)
        if cached is not None:
            return cached
        self.check_path(path)
        n = len(path)
        if n == 0:
            result = self.identity(path.base)
        elif n == 1:
            result = path.arrows[0]
        elif path in self.overrides:
            result = self.overrides[path]
        else:
            result = self.bcomp(self.compose(path.prefix(n - 1)), path.arrows[-1])
        with _CACHE_LOCK:
            result = self._compose_cache.setdefault(path, result)
        return result

    # value semantics, declaration order is irrelevant
    def _semantic(self):
        weak = self.weak
        weak_key = None
        if weak is not None:
            weak_key = (frozenset(weak.hcomp.items()), frozenset(weak.hunit.items()),
                        frozenset(weak.theta.items()), weak.theta_fallback, weak.theta_withheld)
        return (self._objects, frozenset(self.arrow_table.items()), frozenset(self.identity_table.items()),
                frozenset(self.bcomp_table.items()), frozenset(self.overrides.items()),
                frozenset(self.J_table.items()), self._frontier, weak_key)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self._semantic() == other._semantic()

    __hash__ = None

    def replace(self, **changes) -> Presentation:
        fields = dict(objects=self.object_decl, arrows=self.arrow_table, identity=self.identity_table,
                      bcomp=self.bcomp_table, J=self.J_table, frontier=self.frontier_decl,
                      overrides=self.overrides, weak=self.weak)
        unknown = set(changes) - set(fields)
        if unknown:
            raise TypeError(f"unknown presentation fields: {sorted(unknown)}")
        fields.update(changes)
        return Presentation(**fields)

    def weak_or_default(self) -> WeakStructure:
        return self.weak if self.weak is not None else WeakStructure()

    def to_document(self) -> dict:
        doc = {
            "objects": list(self.object_decl),
            "arrows": [{"id": f, "dom": d, "cod": c} for f, (d, c) in self.arrow_table.items()],
            "identity": dict(self.identity_table),
            "bcomp": [{"left": l, "right": r, "out": o} for (l, r), o in self.bcomp_table.items()],
            "overrides": [{"base": p.base, "arrows": list(p.arrows), "out": o} for p, o in self.overrides.items()],
            "J": dict(self.J_table),
            "frontier": list(self.frontier_decl),
        }
        if self.weak is not None:
            w = self.weak
            weak = {
                "hcomp": [{"left": l, "right": r, "out": o} for (l, r), o in w.hcomp.items()],
                "hunit": dict(w.hunit),
                "theta": [dict(key.to_dict(), cert=cert.to_dict()) for key, cert in w.theta.items()],
            }
            if w.theta_fallback is not None:
                weak["theta_fallback"] = w.theta_fallback
            if w.theta_withheld:
                weak["theta_withheld"] = [k.to_dict() for k in sorted(w.theta_withheld, key=str)]
            doc["weak"] = weak
        return doc


def emit_presentation(P: Presentation) -> str:
    """ canonical text: keys sorted, arrays in declaration order """
    return canonical_json(P.to_document())


class _Refs:
    """ reference checks while parsing, reporting the JSON pointer of the offender """

    def __init__(self, objects, arrows, source):
        self.objects = objects
        self.arrows = arrows
        self.source = source

    def obj(self, x, where):
        if x not in self.objects:
            raise DanglingReferenceError(f"undeclared object {x!r}", self.source, where)
        return x

    def arr(self, f, where):
        if f not in self.arrows:
            raise DanglingReferenceError(f"undeclared arrow {f!r}", self.source, where)
        return f


def _unique(items, what, where, source):
    seen = set()
    for i, x in enumerate(items):
        if x in seen:
            raise DuplicateIdError(f"duplicate {what} {x!r}", source, f"{where}/{i}")
        seen.add(x)
    return seen


def _theta_key(raw, refs: _Refs, where: str) -> ThetaKey:
    base = refs.obj(raw["base"], where + "/base")
    arrows = tuple(refs.arr(f, f"{where}/arrows/{i}") for i, f in enumerate(raw["arrows"]))
    if not raw["a"] <= raw["b"] <= len(arrows):
        raise PresentationError(f"cut indices must satisfy 0 <= a <= b <= {len(arrows)}", refs.source, where)
    return ThetaKey(Path(base, arrows), raw["a"], raw["b"])


def _theta_cert(raw, refs: _Refs, where: str) -> RationalCert:
    cert = RationalCert.from_dict(raw, refs.source)
    for i, node in enumerate(raw["nodes"]):
        refs.obj(node["left"], f"{where}/nodes/{i}/left")
        refs.obj(node["right"], f"{where}/nodes/{i}/right")
        for name in ("fwd", "bwd"):
            if node.get(name) is not None:
                refs.arr(node[name], f"{where}/nodes/{i}/{name}")
    return cert


def _parse_weak(raw: dict, refs: _Refs) -> WeakStructure:
    hcomp = {}
    for i, e in enumerate(raw.get("hcomp", [])):
        where = f"/weak/hcomp/{i}"
        key = (refs.arr(e["left"], where + "/left"), refs.arr(e["right"], where + "/right"))
        if key in hcomp:
            raise DuplicateIdError(f"duplicate hcomp entry {key}", refs.source, where)
        hcomp[key] = refs.arr(e["out"], where + "/out")
    hunit = {refs.obj(x, "/weak/hunit"): refs.arr(c, f"/weak/hunit/{x}") for x, c in raw.get("hunit", {}).items()}
    theta = {}
    for i, e in enumerate(raw.get("theta", [])):
        where = f"/weak/theta/{i}"
        key = _theta_key(e, refs, where)
        if key in theta:
            raise DuplicateIdError(f"duplicate theta entry {key}", refs.source, where)
        theta[key] = _theta_cert(e["cert"], refs, where + "/cert")
    withheld = frozenset(_theta_key(e, refs, f"/weak/theta_withheld/{i}")
                         for i, e in enumerate(raw.get("theta_withheld", [])))
    return WeakStructure(hcomp, hunit, theta, raw.get("theta_fallback"), withheld)


def parse_presentation(text: str, source: Optional[str] = None) -> Presentation:
    """
    Parse a presentation document

    Raises:
        PresentationError: syntax or schema error, with position
        DuplicateIdError, DanglingReferenceError
    """
    doc = load_document(text, PRESENTATION_SCHEMA, source)
    objects = _unique(doc["objects"], "object", "/objects", source)
    arrow_ids = _unique([a["id"] for a in doc["arrows"]], "arrow", "/arrows", source)
    clash = objects & arrow_ids
    if clash:
        raise DuplicateIdError(f"identifiers used as object and arrow: {sorted(clash)}", source, "/arrows")
    refs = _Refs(objects, arrow_ids, source)

    arrows = {}
    for i, a in enumerate(doc["arrows"]):
        arrows[a["id"]] = (refs.obj(a["dom"], f"/arrows/{i}/dom"), refs.obj(a["cod"], f"/arrows/{i}/cod"))
    identity = {refs.obj(x, "/identity"): refs.arr(f, f"/identity/{x}") for x, f in doc["identity"].items()}
    bcomp = {}
    for i, e in enumerate(doc.get("bcomp", [])):
        where = f"/bcomp/{i}"
        key = (refs.arr(e["left"], where + "/left"), refs.arr(e["right"], where + "/right"))
        if key in bcomp:
            raise DuplicateIdError(f"duplicate bcomp entry {key}", source, where)
        bcomp[key] = refs.arr(e["out"], where + "/out")
    overrides = {}
    for i, e in enumerate(doc.get("overrides", [])):
        where = f"/overrides/{i}"
        path = Path(refs.obj(e["base"], where + "/base"),
                    tuple(refs.arr(f, f"{where}/arrows/{k}") for k, f in enumerate(e["arrows"])))
        if len(path) < 2:
            raise PresentationError("overrides need paths of length >= 2", source, where)
        if path in overrides:
            raise DuplicateIdError(f"duplicate override for {path}", source, where)
        overrides[path] = refs.arr(e["out"], where + "/out")
    J = {refs.arr(f, "/J"): refs.obj(x, f"/J/{f}") for f, x in doc["J"].items()}
    frontier = doc.get("frontier", [])
    _unique(frontier, "frontier object", "/frontier", source)
    for i, x in enumerate(frontier):
        refs.obj(x, f"/frontier/{i}")
    weak = _parse_weak(doc["weak"], refs) if "weak" in doc else None

    P = Presentation(doc["objects"], arrows, identity, bcomp, J, frontier, overrides, weak)
    logger.debug("parsed %r from %s", P, source or "<text>")
    return P


def switchback(P, x, inverse: bool = False):
    """
    Forward: J(x) for an arrow x. Inverse: the arrow whose switchback is the object x,
    or None when x is not in J's range.
    """
    if inverse:
        return P.switchback_inverse(x)
    return P.switchback(x)


def validate_presentation(P: Presentation) -> Report:
    """
    Structural checks of a presentation. Problems become findings, never exceptions.
    """
    report = Report()
    arrows = P.arrows()

    missing_J = [f for f in arrows if f not in P.J_table]
    for f in missing_J:
        report.add("J-total", Status.FAIL, arrow=f)
    report.add("J-total", Status.PASS, checked=len(arrows) - len(missing_J))

    by_object = collections.defaultdict(list)
    for f in arrows:
        if f in P.J_table:
            by_object[P.J_table[f]].append(f)
    unique = 0
    for x in sorted_ids(by_object):
        if len(by_object[x]) > 1:
            report.add("J-injective", Status.FAIL, object=x, arrows=by_object[x])
        else:
            unique += 1
    report.add("J-injective", Status.PASS, checked=unique)

    typed = 0
    for (l, r), o in sorted(P.bcomp_table.items()):
        if P.cod(l) == P.dom(r) and P.dom(o) == P.dom(l) and P.cod(o) == P.cod(r):
            typed += 1
        else:
            report.add("bcomp-typing", Status.FAIL, left=l, right=r, out=o)
    report.add("bcomp-typing", Status.PASS, checked=typed)

    present = 0
    for f in arrows:
        for g in P.arrows_from(P.cod(f)):
            if (f, g) in P.bcomp_table:
                present += 1
            elif P.touches_frontier(P.dom(f), P.cod(f), P.cod(g)):
                report.add("bcomp-domain", Status.SKIPPED_FRONTIER, left=f, right=g)
            else:
                report.add("bcomp-domain", Status.FAIL, left=f, right=g)
    report.add("bcomp-domain", Status.PASS, checked=present)

    good = 0
    for x in P.objects():
        f = P.identity_table.get(x)
        if f is None:
            if P.is_frontier(x):
                report.add("identity-typing", Status.SKIPPED_FRONTIER, object=x)
            else:
                report.add("identity-typing", Status.FAIL, object=x, arrow=None)
        elif P.dom(f) == x and P.cod(f) == x:
            good += 1
        else:
            report.add("identity-typing", Status.FAIL, object=x, arrow=f)
    report.add("identity-typing", Status.PASS, checked=good)

    good = 0
    for path, out in P.overrides.items():
        try:
            P.check_path(path)
            ok = P.dom(out) == path.base and P.cod(out) == P.endpoint(path)
        except FoldError:
            ok = False
        if ok:
            good += 1
        else:
            report.add("override-typing", Status.FAIL, path=path.to_dict(), out=out)
    report.add("override-typing", Status.PASS, checked=good)

    # compose(<A,f>) returns f without consulting any table
    report.add("unary-law", Status.PASS, checked=len(arrows))

    for x in sorted_ids(P.frontier):
        report.add("frontier", Status.SKIPPED_FRONTIER, object=x)
    return report


def truncate_oracle(O: GenerativeView, tower_depth: int, path_budget: int,
                    max_states: Optional[int] = None) -> Presentation:
    """
    Finite window onto a lazy view: objects of tower level <= tower_depth, arrows of
    generation <= path_budget. Objects whose identity, J-successor, arrows or composites
    leave the window are marked frontier. The lazy view must be strictly associative,
    composition inside the window is emitted as bcomp only.

    Raises:
        BudgetExceededError: more than max_states objects, arrows and composable pairs
    """
    spend = StateBudget("truncate_oracle", max_states).spend

    def inside(x) -> bool:
        return O.object_level(x) <= tower_depth

    objects: List = []
    arrows: Dict = {}
    J: Dict = {}
    frontier = set()
    queue = collections.deque(sorted_ids(O.base_objects()))
    seen = set(queue)
    while queue:
        x = queue.popleft()
        objects.append(x)
        spend()
        for f in O.arrows_from_bounded(x, path_budget + 1):
            spend()
            c, j = O.cod(f), O.switchback(f)
            reached = [c]
            if O.arrow_generation(f) > path_budget or not inside(c) or not inside(j):
                frontier.add(x)
                if inside(c):
                    frontier.add(c)
            else:
                arrows[f] = (x, c)
                J[f] = j
                reached.append(j)
            for y in reached:
                if y not in seen and inside(y):
                    seen.add(y)
                    queue.append(y)

    identity = {}
    for x in objects:
        try:
            f = O.identity(x)
        except FoldError:
            f = None
        if f in arrows:
            identity[x] = f
        else:
            frontier.add(x)

    outgoing = collections.defaultdict(list)
    for f, (d, _) in arrows.items():
        outgoing[d].append(f)
    bcomp = {}
    for f, (d, c) in arrows.items():
        for g in outgoing[c]:
            spend()
            h = O.compose(Path(d, (f, g)))
            if h in arrows:
                bcomp[(f, g)] = h
            else:
                frontier.update((d, c, arrows[g][1]))

    weak = O.weak_structure()
    if weak is not None:
        weak = dataclasses.replace(
            weak,
            hcomp={k: o for k, o in weak.hcomp.items() if k[0] in arrows and k[1] in arrows and o in arrows},
            hunit={x: c for x, c in weak.hunit.items() if x in seen and c in arrows},
            theta={k: c for k, c in weak.theta.items() if all(f in arrows for f in k.path.arrows)})

    P = Presentation(objects, arrows, identity, bcomp, J, [x for x in objects if x in frontier], {}, weak)
    logger.debug("truncated %s at depth %d, budget %d: %r", type(O).__name__, tower_depth, path_budget, P)
    return P


def restrict_window(P: Presentation, O: GenerativeView, tower_depth: int) -> Presentation:
    """
    P restricted to level <= tower_depth: objects of that level, arrows whose ends and
    switchback stay at that level, and the identities, composites, overrides and J entries
    among them. Objects that lose an arrow, an identity or a composite are marked frontier.
    A window truncated at depth d + 1 restricts to the window truncated at depth d, up to
    the frontier.
    """
    def inside(x) -> bool:
        return O.object_level(x) <= tower_depth

    objects = [x for x in P.object_decl if inside(x)]
    kept = set(objects)
    frontier = {x for x in P.frontier if x in kept}
    arrows = {}
    for f, (d, c) in P.arrow_table.items():
        j = P.J_table.get(f)
        if d in kept and c in kept and j is not None and inside(j):
            arrows[f] = (d, c)
        else:
            frontier.update(x for x in (d, c) if x in kept)
    identity = {x: f for x, f in P.identity_table.items() if x in kept and f in arrows}
    frontier.update(x for x in objects if x not in identity)
    bcomp = {}
    for (f, g), h in P.bcomp_table.items():
        if f not in arrows or g not in arrows:
            continue
        if h in arrows:
            bcomp[(f, g)] = h
        else:
            frontier.update((arrows[f][0], arrows[f][1], arrows[g][1]))
    overrides = {p: o for p, o in P.overrides.items() if o in arrows and all(f in arrows for f in p.arrows)}
    J = {f: P.J_table[f] for f in arrows}

    weak = P.weak
    if weak is not None:
        weak = dataclasses.replace(
            weak,
            hcomp={k: o for k, o in weak.hcomp.items() if k[0] in arrows and k[1] in arrows and o in arrows},
            hunit={x: c for x, c in weak.hunit.items() if x in kept and c in arrows},
            theta={k: c for k, c in weak.theta.items() if all(f in arrows for f in k.path.arrows)})

    R = Presentation(objects, arrows, identity, bcomp, J, [x for x in objects if x in frontier], overrides, weak)
    logger.debug("restricted %r to depth %d: %r", P, tower_depth, R)
    return R
