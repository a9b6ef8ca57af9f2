#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Structures derived from a presentation: the arrow category, iterated boundaries,
power structures C^[n], functors, cell levels, discreteness and shape classification
"""

from __future__ import annotations

import collections
import itertools
import logging
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from foldcat._presentation import Presentation
from foldcat._proto import (CellLevelMap, Discreteness, FunctorData, Path, Report, Shape,
                            ShapeClassification, Status)
from foldcat._utils import StateBudget, sorted_ids, tuple_token
from foldcat._view import FiniteView
from foldcat.errors import (FoldError, FrontierIncompleteError, IllTypedPathError,
                            MissingEntryError, NonGlobularError, PreconditionError)

logger = logging.getLogger(__name__)


class ArrowCategory(FiniteView):
    """
    C↺: objects are the arrows of the base, hom(f, g) are the base arrows Jf -> Jg.
    The switchback of a cell is the cell itself.
    """

    def __init__(self, base: FiniteView):
        self.base = base

    def __repr__(self):
        return f"ArrowCategory({self.base!r})"

    def objects(self) -> List:
        return self.base.arrows()

    def arrows(self) -> List:
        return [a for a in self.base.arrows() if self.has_arrow(a)]

    @property
    def frontier(self) -> FrozenSet:
        cached = self.__dict__.get("_frontier")
        if cached is None:
            cached = set()
            for f in self.base.arrows():
                try:
                    if self.base.is_frontier(self.base.switchback(f)):
                        cached.add(f)
                except FoldError:
                    cached.add(f)
            cached = frozenset(cached)
            self.__dict__["_frontier"] = cached
        return cached

    def has_object(self, f) -> bool:
        return self.base.has_arrow(f)

    def has_arrow(self, a) -> bool:
        return (self.base.has_arrow(a)
                and self.base.switchback_inverse(self.base.dom(a)) is not None
                and self.base.switchback_inverse(self.base.cod(a)) is not None)

    def dom(self, a):
        return self.base.switchback_inverse(self.base.dom(a))

    def cod(self, a):
        return self.base.switchback_inverse(self.base.cod(a))

    def switchback(self, a):
        return a

    def switchback_inverse(self, f):
        return f if self.has_arrow(f) else None

    def identity(self, f):
        return self.base.identity(self.base.switchback(f))

    def hom(self, f, g) -> List:
        return self.base.hom(self.base.switchback(f), self.base.switchback(g))

    def compose(self, path: Path):
        self.check_path(path)
        return self.base.compose(Path(self.base.switchback(path.base), path.arrows))


def arrow_category(P: FiniteView) -> ArrowCategory:
    return ArrowCategory(P)


def check_globular(P: FiniteView) -> Report:
    """ every cell JF -> JG must sit between parallel arrows F and G """
    report = Report()
    checked = 0
    for a in P.arrows():
        F = P.switchback_inverse(P.dom(a))
        G = P.switchback_inverse(P.cod(a))
        if F is None or G is None:
            continue
        if P.dom(F) == P.dom(G) and P.cod(F) == P.cod(G):
            checked += 1
        else:
            report.add("globular", Status.FAIL, cell=a, source=F, target=G)
    report.add("globular", Status.PASS, checked=checked)
    return report


def _boundary(P: FiniteView, a, k: int, side: str):
    step = P.dom if side == "dom" else P.cod
    x = step(a)
    for _ in range(k - 1):
        f = P.switchback_inverse(x)
        if f is None:
            return None
        x = step(f)
    return x


def iterated_boundary(P: FiniteView, a, k: int, side: str = "dom"):
    """
    dom^1 = dom, dom^{k+1}(a) = dom(J^-1(dom^k(a))); likewise for cod.

    Returns:
        the boundary object, or None when an intermediate object is outside J's range

    Raises:
        PreconditionError: k < 1 or unknown side
        NonGlobularError: P is not globular
    """
    if k < 1:
        raise PreconditionError("iterated boundaries start at k = 1")
    if side not in ("dom", "cod"):
        raise PreconditionError(f"side must be dom or cod, not {side!r}")
    if not check_globular(P).ok:
        raise NonGlobularError("iterated boundaries need a globular presentation")
    return _boundary(P, a, k, side)


class PowerStructure(FiniteView):
    """
    Materialized C^[n]: tuple objects and tuple arrows over a component view
    (C↺ for n >= 1, the base itself for n = 0), composed and switched back componentwise.
    """

    def __init__(self, base: FiniteView, n: int, component: FiniteView,
                 objects: Set[Tuple], arrows: Set[Tuple], j_closed: bool = True,
                 report: Optional[Report] = None):
        self.base = base
        self.n = n
        self.component = component
        self._objects = frozenset(objects)
        self._arrows = frozenset(arrows)
        self.j_closed = j_closed
        self.report = report if report is not None else Report()

    def __repr__(self):
        return "PowerStructure(n={}, objects={}, arrows={})".format(self.n, len(self._objects), len(self._arrows))

    def objects(self) -> List:
        return sorted_ids(self._objects)

    def arrows(self) -> List:
        return sorted_ids(self._arrows)

    @property
    def frontier(self) -> FrozenSet:
        return frozenset(t for t in self._objects if any(self.component.is_frontier(x) for x in t))

    def has_object(self, t) -> bool:
        return t in self._objects

    def has_arrow(self, t) -> bool:
        return t in self._arrows

    def dom(self, t):
        return tuple(self.component.dom(a) for a in t)

    def cod(self, t):
        return tuple(self.component.cod(a) for a in t)

    def switchback(self, t):
        return tuple(self.component.switchback(a) for a in t)

    def switchback_inverse(self, s):
        pre = tuple(self.component.switchback_inverse(x) for x in s)
        if any(p is None for p in pre) or pre not in self._arrows:
            return None
        return pre

    def identity(self, s):
        return tuple(self.component.identity(x) for x in s)

    def compose(self, path: Path):
        self.check_path(path)
        return tuple(self.component.compose(Path(path.base[i], tuple(a[i] for a in path.arrows)))
                     for i in range(len(path.base)))


def power_structure(P: FiniteView, n: int, max_states: Optional[int] = None,
                    j_closed: bool = True, verify: bool = True) -> PowerStructure:
    """
    Least full, switchback-closed substructure of the n-fold product of C↺ containing
    every composable path of length n. For n = 0: the points of P with their identities,
    composites of identity paths and, when j_closed, the switchbacks of those.

    Raises:
        PreconditionError: negative arity
        BudgetExceededError: closure or membership verification exceeds max_states
    """
    if n < 0:
        raise PreconditionError("arity must be >= 0")
    budget = StateBudget(f"power_structure(n={n})", max_states)
    if n == 0:
        return _power_zero(P, budget, j_closed)

    C = ArrowCategory(P)
    objects: Set[Tuple] = set()
    arrows: Set[Tuple] = set()
    by_head: Dict = collections.defaultdict(set)
    work = collections.deque()

    def add_object(t):
        if t not in objects:
            budget.spend()
            objects.add(t)
            by_head[t[0]].add(t)
            work.append(t)

    def connect(s, t):
        for a in itertools.product(*(C.hom(x, y) for x, y in zip(s, t))):
            if a not in arrows:
                budget.spend()
                arrows.add(a)
                add_object(a)

    for path in P.paths(n):
        add_object(path.arrows)
    while work:
        s = work.popleft()
        heads_out = {C.cod(a) for a in C.arrows_from(s[0])}
        for t in sorted_ids(set().union(*(by_head[h] for h in heads_out)) if heads_out else ()):
            connect(s, t)
        heads_in = {C.dom(a) for a in C.arrows_to(s[0])}
        for t in sorted_ids(set().union(*(by_head[h] for h in heads_in)) if heads_in else ()):
            if t != s:
                connect(t, s)

    power = PowerStructure(P, n, C, objects, arrows, True)
    logger.debug("built %r", power)
    if verify:
        power.report.extend(check_power_membership(power, max_states))
    return power


def _power_zero(P: FiniteView, budget: StateBudget, j_closed: bool) -> PowerStructure:
    objects: Set[Tuple] = set()
    arrows: Set[Tuple] = set()
    work = collections.deque()

    def add_object(x):
        if (x,) not in objects:
            budget.spend()
            objects.add((x,))
            work.append(x)

    for x in P.objects():
        if P.is_point(x):
            add_object(x)
    while work:
        x = work.popleft()
        generated = []
        try:
            one = P.identity(x)
            generated.append(one)
            generated.append(P.compose(Path(x, (one, one))))
        except FoldError:
            pass
        for a in generated:
            if (a,) not in arrows:
                budget.spend()
                arrows.add((a,))
                if j_closed:
                    try:
                        add_object(P.switchback(a))
                    except FoldError:
                        pass
    report = Report()
    if not j_closed:
        report.add("power-zero-mode", Status.PASS, j_closed=False)
    return PowerStructure(P, 0, P, objects, arrows, j_closed, report)


def _boundary_chain(P: FiniteView, a, side: str, cap: int) -> List:
    chain = []
    x = a
    for k in range(1, cap + 1):
        x = _boundary(P, a, k, side)
        if x is None:
            break
        chain.append(x)
    return chain


def deep_composable(P: FiniteView, tup: Tuple, cap: Optional[int] = None) -> bool:
    """ ∃k >= 1 with cod^k(a_i) = dom^k(a_{i+1}) for all i """
    if len(tup) < 2:
        return True
    cap = cap if cap is not None else len(P.objects()) + 1
    cods = [_boundary_chain(P, a, "cod", cap) for a in tup[:-1]]
    doms = [_boundary_chain(P, a, "dom", cap) for a in tup[1:]]
    depth = min(len(c) for c in cods + doms)
    return any(all(cods[i][k] == doms[i][k] for i in range(len(cods))) for k in range(depth))


def check_power_membership(power: PowerStructure, max_states: Optional[int] = None) -> Report:
    """ every deep-composable n-tuple of base arrows must be an object of the power structure """
    report = Report()
    if power.n == 0:
        return report
    budget = StateBudget(f"membership(n={power.n})", max_states)
    P = power.base
    present = 0
    for tup in itertools.product(P.arrows(), repeat=power.n):
        budget.spend()
        if not deep_composable(P, tup):
            continue
        if power.has_object(tup):
            present += 1
        else:
            report.add("power-membership", Status.FAIL, tuple=list(tup))
    report.add("power-membership", Status.PASS, checked=present, n=power.n)
    return report


def identity_functor(view: FiniteView) -> FunctorData:
    return FunctorData(view, view, {x: x for x in view.objects()}, {f: f for f in view.arrows()})


def validate_functor(F: FunctorData, max_path_len: int = 3, max_states: Optional[int] = None) -> Report:
    """
    Quiver-morphism typing, preservation of composition on paths up to max_path_len
    and preservation of the switchback, on the in-window part of the source.
    """
    source, target = F.source, F.target
    report = Report()
    budget = StateBudget("validate_functor", max_states)

    typed = 0
    for f in source.arrows():
        try:
            Ff = F.arr(f)
            ok = (target.has_arrow(Ff) and target.dom(Ff) == F.obj(source.dom(f))
                  and target.cod(Ff) == F.obj(source.cod(f)))
        except MissingEntryError:
            ok = False
        if ok:
            typed += 1
        else:
            report.add("functor-typing", Status.FAIL, arrow=f)
    report.add("functor-typing", Status.PASS, checked=typed)

    kept = 0
    for f in source.arrows():
        try:
            ok = F.obj(source.switchback(f)) == target.switchback(F.arr(f))
        except FrontierIncompleteError:
            report.add("functor-switchback", Status.SKIPPED_FRONTIER, arrow=f)
            continue
        except FoldError:
            ok = False
        if ok:
            kept += 1
        else:
            report.add("functor-switchback", Status.FAIL, arrow=f)
    report.add("functor-switchback", Status.PASS, checked=kept)

    preserved = {0: 0}
    for path in source.paths_up_to(max_path_len):
        budget.spend()
        try:
            lhs = F.arr(source.compose(path))
        except FrontierIncompleteError:
            report.add("functor-composition", Status.SKIPPED_FRONTIER, path=path.to_dict())
            continue
        except MissingEntryError:
            report.add("functor-composition", Status.FAIL, path=path.to_dict(), reason="no image")
            continue
        try:
            image = Path(F.obj(path.base), tuple(F.arr(a) for a in path.arrows))
            rhs = target.compose(image)
        except FrontierIncompleteError:
            report.add("functor-composition", Status.SKIPPED_FRONTIER, path=path.to_dict())
            continue
        except (MissingEntryError, IllTypedPathError):
            rhs = None
        if lhs == rhs:
            preserved[len(path)] = preserved.get(len(path), 0) + 1
        else:
            report.add("functor-composition", Status.FAIL, path=path.to_dict(),
                       expected=lhs, actual=rhs)
    report.add("functor-composition", Status.PASS, checked=sum(preserved.values()))
    # identities are the images of empty paths
    report.add("functor-identity", Status.PASS, checked=preserved[0])
    return report


def cell_levels(P: FiniteView, max_level: int = 8) -> CellLevelMap:
    """
    Greatest n <= max_level such that each object is an n-cell. Levels on or above
    frontier objects are lower bounds only.
    """
    levels = {x: 0 for x in P.objects()}
    lifts = []
    for f in P.arrows():
        try:
            lifts.append((P.switchback(f), P.dom(f), P.cod(f)))
        except FoldError:
            continue
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        for j, d, c in lifts:
            new = min(max_level, min(levels[d], levels[c]) + 1)
            if new > levels[j]:
                levels[j] = new
                changed = True
    lower = {x for x in P.objects() if P.is_frontier(x) and levels[x] < max_level}
    changed = True
    while changed:
        changed = False
        for j, d, c in lifts:
            if j not in lower and levels[j] < max_level and (d in lower or c in lower):
                lower.add(j)
                changed = True
    logger.debug("cell levels stable after %d rounds", rounds)
    return CellLevelMap(levels, frozenset(lower), max_level)


def _discrete_here(P: FiniteView, x) -> bool:
    arrows = set(P.arrows_from(x)) | set(P.arrows_to(x))
    return arrows == {P.identity(x)}


def discreteness(P: FiniteView, A, depth: int = 0) -> Discreteness:
    """ discreteness of A_0 = A, A_{k+1} = J(1_{A_k}) for k <= depth """
    x = A
    for k in range(depth + 1):
        if not P.has_object(x) or P.is_frontier(x):
            return Discreteness.FRONTIER
        try:
            if not _discrete_here(P, x):
                return Discreteness.NO
            if k < depth:
                x = P.switchback(P.identity(x))
        except FrontierIncompleteError:
            return Discreteness.FRONTIER
        except MissingEntryError:
            return Discreteness.NO
    return Discreteness.YES


def two_cells(P: FiniteView) -> List:
    """ cells JF -> JG whose arrows F, G run between points """
    cells = []
    for a in P.arrows():
        F = P.switchback_inverse(P.dom(a))
        G = P.switchback_inverse(P.cod(a))
        if F is None or G is None:
            continue
        if all(P.is_point(x) for x in (P.dom(F), P.cod(F), P.dom(G), P.cod(G))):
            cells.append(a)
    return cells


def classify_shape(P: FiniteView, depth: int = 0) -> ShapeClassification:
    """
    category: every switchback Jf is discrete; bicategory-like: every 2-cell object is
    discrete; general otherwise (including non-globular input).
    """
    if not check_globular(P).ok:
        return ShapeClassification(Shape.GENERAL)

    def scan(arrows):
        limited = False
        for f in arrows:
            try:
                verdict = discreteness(P, P.switchback(f), depth)
            except FrontierIncompleteError:
                verdict = Discreteness.FRONTIER
            if verdict == Discreteness.NO:
                return False, limited
            limited = limited or verdict == Discreteness.FRONTIER
        return True, limited

    ok, limited = scan(P.arrows())
    if ok:
        return ShapeClassification(Shape.CATEGORY, limited)
    ok, limited = scan(two_cells(P))
    if ok:
        return ShapeClassification(Shape.BICATEGORY_LIKE, limited)
    return ShapeClassification(Shape.GENERAL, limited)


def object_token(x) -> str:
    """ exported object names carry an "@" so they never clash with arrow names """
    return "@" + tuple_token(x)


def export_view(view: FiniteView) -> Presentation:
    """ write any finite view as a presentation, tuple identifiers rendered "(f,g,...)" """
    objects = [object_token(x) for x in view.objects()]
    arrows = {tuple_token(a): (object_token(view.dom(a)), object_token(view.cod(a))) for a in view.arrows()}
    identity = {}
    for x in view.objects():
        try:
            one = view.identity(x)
        except FoldError:
            continue
        if view.has_arrow(one):
            identity[object_token(x)] = tuple_token(one)
    bcomp = {}
    for f in view.arrows():
        for g in view.arrows_from(view.cod(f)):
            try:
                h = view.compose(Path(view.dom(f), (f, g)))
            except FoldError:
                continue
            if view.has_arrow(h):
                bcomp[(tuple_token(f), tuple_token(g))] = tuple_token(h)
    J = {}
    for f in view.arrows():
        try:
            j = view.switchback(f)
        except FoldError:
            continue
        if view.has_object(j):
            J[tuple_token(f)] = object_token(j)
    frontier = [object_token(x) for x in view.objects() if view.is_frontier(x)]
    return Presentation(objects, arrows, identity, bcomp, J, frontier)
