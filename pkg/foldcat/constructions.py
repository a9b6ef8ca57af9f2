#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Lazy constructions, category extraction and presentation mutations

Every construction puts an identity tower over each generating arrow f:
J(f) = <f,0>, the identity of <f,n> is 1_<f,n> and J(1_<f,n>) = <f,n+1>.
Composition is strict, so truncate_oracle() can cut finite windows out of them.
"""

from __future__ import annotations

import abc
import dataclasses
import enum
import logging
import re
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from foldcat._category import CategoryPresentation, FreeCategory, Quiver, TwoCategoryPresentation, \
    check_category_laws
from foldcat._presentation import Presentation
from foldcat._proto import Path, Shape, ThetaKey, WeakStructure
from foldcat._utils import sorted_ids
from foldcat._view import FiniteView, GenerativeView
from foldcat.derived import classify_shape
from foldcat.equivalence import refl_cert
from foldcat.errors import CategoryLawError, FoldError, MutationError, ShapeError

logger = logging.getLogger(__name__)

_TOWER = re.compile(r"^<([^<>,]+),(\d+)>$")
_TOWER_IDENTITY = re.compile(r"^1_<([^<>,]+),(\d+)>$")


def tower(f: str, n: int) -> str:
    return f"<{f},{n}>"


def tower_identity(f: str, n: int) -> str:
    return "1_" + tower(f, n)


def _parse(pattern, token) -> Optional[Tuple[str, int]]:
    if not isinstance(token, str):
        return None
    m = pattern.match(token)
    if m is None:
        return None
    return m.group(1), int(m.group(2))


class TowerConstruction(GenerativeView):
    """
    Carrier objects and the objects that own generating arrows come from the input
    structure; everything above them is an identity tower.
    """

    @abc.abstractmethod
    def carrier(self) -> List[str]:
        """ objects that are not switchbacks """

    @abc.abstractmethod
    def owns(self, x) -> bool:
        """ x carries generating arrows (and its identity is one of them) """

    @abc.abstractmethod
    def is_cell(self, f) -> bool:
        pass

    @abc.abstractmethod
    def cell_boundary(self, f) -> Tuple[str, str]:
        pass

    @abc.abstractmethod
    def cell_identity(self, x) -> str:
        pass

    @abc.abstractmethod
    def cell_generation(self, f) -> int:
        pass

    @abc.abstractmethod
    def cells_from(self, x, max_generation: int) -> List[str]:
        pass

    @abc.abstractmethod
    def cell_compose(self, f, g) -> str:
        pass

    def _is_tower_object(self, x) -> bool:
        parsed = _parse(_TOWER, x)
        if parsed is None:
            return False
        f, n = parsed
        return self.is_cell(f) and (n == 0 or not self.owns(tower(f, 0)))

    def has_object(self, x) -> bool:
        return x in self.carrier() or self._is_tower_object(x)

    def has_arrow(self, f) -> bool:
        if self.is_cell(f):
            return True
        parsed = _parse(_TOWER_IDENTITY, f)
        if parsed is None:
            return False
        x = tower(*parsed)
        return self._is_tower_object(x) and not self.owns(x)

    def dom(self, f):
        if self.is_cell(f):
            return self.cell_boundary(f)[0]
        return f[2:]

    def cod(self, f):
        if self.is_cell(f):
            return self.cell_boundary(f)[1]
        return f[2:]

    def switchback(self, f):
        if self.is_cell(f):
            return tower(f, 0)
        g, n = _parse(_TOWER_IDENTITY, f)
        return tower(g, n + 1)

    def switchback_inverse(self, x):
        if not self._is_tower_object(x):
            return None
        f, n = _parse(_TOWER, x)
        return f if n == 0 else tower_identity(f, n - 1)

    def identity(self, x):
        if x in self.carrier() or self.owns(x):
            return self.cell_identity(x)
        return "1_" + x

    def compose(self, path: Path):
        self.check_path(path)
        if not path.arrows:
            return self.identity(path.base)
        if not self.is_cell(path.arrows[0]):
            return path.arrows[0]
        out = path.arrows[0]
        for g in path.arrows[1:]:
            out = self.cell_compose(out, g)
        return out

    def base_objects(self) -> List:
        return list(self.carrier())

    def object_level(self, x) -> int:
        parsed = _parse(_TOWER, x)
        return 0 if parsed is None else parsed[1]

    def arrow_generation(self, f) -> int:
        return self.cell_generation(f) if self.is_cell(f) else 0

    def arrows_from_bounded(self, x, max_generation: int) -> List:
        if x in self.carrier() or self.owns(x):
            return self.cells_from(x, max_generation)
        return ["1_" + x]


class CategoryTowers(TowerConstruction):
    """ a strict category with identity towers over its morphisms """

    def __init__(self, A: CategoryPresentation):
        self.A = A

    def __repr__(self):
        return f"CategoryTowers(objects={len(self.A.objects)}, morphisms={len(self.A.morphisms)})"

    def carrier(self) -> List[str]:
        return list(self.A.objects)

    def owns(self, x) -> bool:
        return False

    def is_cell(self, f) -> bool:
        return f in self.A.morphisms

    def cell_boundary(self, f):
        return self.A.morphisms[f]

    def cell_identity(self, x):
        return self.A.identity[x]

    def cell_generation(self, f) -> int:
        return 0 if self.A.is_identity(f) else 1

    def cells_from(self, x, max_generation: int) -> List[str]:
        return [f for f in self.A.morphisms_from(x) if self.cell_generation(f) <= max_generation]

    def cell_compose(self, f, g):
        return self.A.compose(f, g)

    def weak_structure(self):
        # cells between switchbacks are identities, the derived unit rule covers hcomp
        return WeakStructure(theta_fallback="reflexive")


class FreeTowers(TowerConstruction):
    """ the free category on a quiver, composition is path concatenation """

    def __init__(self, G: Quiver):
        self.F = FreeCategory(G)

    def __repr__(self):
        return f"FreeTowers(vertices={len(self.F.G.vertices)}, edges={len(self.F.G.edges)})"

    def carrier(self) -> List[str]:
        return list(self.F.G.vertices)

    def owns(self, x) -> bool:
        return False

    def is_cell(self, f) -> bool:
        return isinstance(f, str) and not f.startswith("1_<") and self.F.has_morphism(f)

    def cell_boundary(self, f):
        return self.F.dom(f), self.F.cod(f)

    def cell_identity(self, x):
        return self.F.empty(x)

    def cell_generation(self, f) -> int:
        return self.F.length(f)

    def cells_from(self, x, max_generation: int) -> List[str]:
        return self.F.paths_from(x, max_generation)

    def cell_compose(self, f, g):
        return self.F.compose(f, g)

    def weak_structure(self):
        return WeakStructure(theta_fallback="reflexive")


class TwoCategoryTowers(TowerConstruction):
    """
    Objects of T, one object <a,0> per 1-cell a, and identity towers over the 2-cells.
    1-cells run between objects of T, 2-cells a => b run from <a,0> to <b,0>.
    """

    def __init__(self, T: TwoCategoryPresentation):
        self.T = T

    def __repr__(self):
        return f"TwoCategoryTowers(1-cells={len(self.T.one_cells)}, 2-cells={len(self.T.two_cells)})"

    def carrier(self) -> List[str]:
        return list(self.T.objects)

    def owns(self, x) -> bool:
        parsed = _parse(_TOWER, x)
        return parsed is not None and parsed[1] == 0 and parsed[0] in self.T.one_cells

    def is_cell(self, f) -> bool:
        return f in self.T.one_cells or f in self.T.two_cells

    def cell_boundary(self, f):
        if f in self.T.one_cells:
            return self.T.one_cells[f]
        a, b = self.T.two_cells[f]
        return tower(a, 0), tower(b, 0)

    def cell_identity(self, x):
        if x in self.T.one_identity:
            return self.T.one_identity[x]
        return self.T.two_identity[_parse(_TOWER, x)[0]]

    def cell_generation(self, f) -> int:
        identities = (self.T.one_identity, self.T.two_identity)
        return 0 if any(f in table.values() for table in identities) else 1

    def cells_from(self, x, max_generation: int) -> List[str]:
        if x in self.T.one_identity:
            table = self.T.one_cells
        else:
            x = _parse(_TOWER, x)[0]
            table = self.T.two_cells
        return sorted_ids(f for f, (d, _) in table.items() if d == x and self.cell_generation(f) <= max_generation)

    def cell_compose(self, f, g):
        if f in self.T.one_cells:
            return self.T.one_composition[(f, g)]
        return self.T.vertical[(f, g)]

    def weak_structure(self):
        return WeakStructure(hcomp=dict(self.T.horizontal), theta_fallback="reflexive")


def from_category(A: CategoryPresentation) -> CategoryTowers:
    return CategoryTowers(A)


def from_strict_2category(T: TwoCategoryPresentation) -> TwoCategoryTowers:
    return TwoCategoryTowers(T)


def free_strict_on_graph(G: Quiver) -> FreeTowers:
    return FreeTowers(G)


def extract_category(P: FiniteView) -> CategoryPresentation:
    """
    Points of P (objects that are not switchbacks of a foreign arrow) and the arrows
    between them, with composition read from P.

    Raises:
        ShapeError: P is not category-shaped, or the points do not form a category
    """
    shape = classify_shape(P)
    if shape.shape != Shape.CATEGORY:
        raise ShapeError(f"presentation is {shape.shape.value}, not category-shaped")
    objects = [x for x in P.objects() if P.is_point(x)]
    points = set(objects)
    morphisms = {f: (P.dom(f), P.cod(f)) for f in P.arrows() if P.dom(f) in points and P.cod(f) in points}
    try:
        identity = {x: P.identity(x) for x in objects}
        composition = {(f, g): P.compose(Path(d, (f, g)))
                       for f, (d, c) in morphisms.items() for g, (d2, _) in morphisms.items() if d2 == c}
    except FoldError as e:
        raise ShapeError(f"points do not carry a category: {e}") from e
    A = CategoryPresentation(tuple(objects), morphisms, identity, composition)
    try:
        check_category_laws(A)
    except CategoryLawError as e:
        raise ShapeError(str(e)) from e
    logger.debug("extracted category with %d objects and %d morphisms", len(objects), len(morphisms))
    return A


class MutationKind(str, enum.Enum):
    RETARGET_J = "retarget-J"
    REWIRE_BCOMP = "rewire-bcomp"
    DROP_THETA = "drop-theta"
    RETYPE_ARROW = "retype-arrow"
    REWIRE_HCOMP = "rewire-hcomp"
    REPLACE_THETA = "replace-theta"


@dataclass(frozen=True)
class Mutation:
    """
    target is an arrow (retarget-J, retype-arrow), a pair of arrows (rewire-bcomp,
    rewire-hcomp) or a ThetaKey (drop-theta, replace-theta). value is the new object,
    arrow, (dom, cod) pair, or for replace-theta the object whose reflexivity
    certificate replaces the entry.
    """
    kind: MutationKind
    target: Any
    value: Any = None

    def __str__(self):
        return f"{self.kind.value}:{self.target}->{self.value}"


def mutate_presentation(P: Presentation, mutation: Mutation) -> Presentation:
    """
    Exactly one entry changed, nothing validated

    Raises:
        MutationError: the mutation names entries that do not exist
    """
    kind, target, value = MutationKind(mutation.kind), mutation.target, mutation.value

    def need_arrow(f):
        if not P.has_arrow(f):
            raise MutationError(f"{kind.value}: unknown arrow {f}")

    def need_object(x):
        if not P.has_object(x):
            raise MutationError(f"{kind.value}: unknown object {x}")

    if kind == MutationKind.RETARGET_J:
        need_arrow(target)
        need_object(value)
        return P.replace(J={**P.J_table, target: value})
    if kind == MutationKind.RETYPE_ARROW:
        need_arrow(target)
        for x in value:
            need_object(x)
        return P.replace(arrows={**P.arrow_table, target: tuple(value)})
    if kind == MutationKind.REWIRE_BCOMP:
        if tuple(target) not in P.bcomp_table:
            raise MutationError(f"{kind.value}: no composition entry for {target}")
        need_arrow(value)
        return P.replace(bcomp={**P.bcomp_table, tuple(target): value})

    W = P.weak_or_default()
    if kind == MutationKind.REWIRE_HCOMP:
        if tuple(target) not in W.hcomp:
            raise MutationError(f"{kind.value}: no hcomp entry for {target}")
        need_arrow(value)
        return P.replace(weak=dataclasses.replace(W, hcomp={**W.hcomp, tuple(target): value}))
    if not isinstance(target, ThetaKey):
        raise MutationError(f"{kind.value}: target must be a theta key, got {target!r}")
    need_object(target.path.base)
    for f in target.path.arrows:
        need_arrow(f)
    if kind == MutationKind.DROP_THETA:
        theta = {k: c for k, c in W.theta.items() if k != target}
        return P.replace(weak=dataclasses.replace(W, theta=theta, theta_withheld=W.theta_withheld | {target}))
    if kind == MutationKind.REPLACE_THETA:
        need_object(value)
        try:
            cert = refl_cert(P, value)
        except FoldError as e:
            raise MutationError(f"{kind.value}: no reflexivity certificate at {value}: {e}") from e
        return P.replace(weak=dataclasses.replace(W, theta={**W.theta, target: cert}))
    raise MutationError(f"unknown mutation kind {kind}")


# single-entry mutants of the walking-isomorphism and 2-cell fixtures, each caught by a validator
MUTATION_CATALOGUE: Tuple[Tuple[str, Mutation], ...] = (
    ("FIX-ISO", Mutation(MutationKind.RETARGET_J, "u", "<v,0>")),
    ("FIX-ISO", Mutation(MutationKind.RETARGET_J, "1_<u,0>", "<u,0>")),
    ("FIX-ISO", Mutation(MutationKind.REWIRE_BCOMP, ("u", "v"), "id_Y")),
    ("FIX-ISO", Mutation(MutationKind.REWIRE_BCOMP, ("id_X", "u"), "v")),
    ("FIX-ISO", Mutation(MutationKind.RETYPE_ARROW, "u", ("X", "X"))),
    ("FIX-ISO", Mutation(MutationKind.REPLACE_THETA, ThetaKey(Path("X", ("u", "v")), 0, 2), "<id_Y,0>")),
    ("FIX-ISO", Mutation(MutationKind.RETYPE_ARROW, "1_<u,0>", ("<u,0>", "<u,1>"))),
    ("FIX-2CAT", Mutation(MutationKind.REWIRE_BCOMP, ("alpha", "beta"), "alpha")),
    ("FIX-2CAT", Mutation(MutationKind.REWIRE_HCOMP, ("alpha", "i_b"), "betab")),
    ("FIX-2CAT", Mutation(MutationKind.REWIRE_HCOMP, ("i_idx", "alpha"), "beta")),
    ("FIX-2CAT", Mutation(MutationKind.RETARGET_J, "alpha", "<beta,0>")),
    ("FIX-2CAT", Mutation(MutationKind.RETYPE_ARROW, "alphab", ("<a,0>", "<a2b,0>"))),
)
