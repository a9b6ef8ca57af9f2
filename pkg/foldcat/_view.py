#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Abstract read-only interface to a pre-folded category

A view answers membership, dom/cod, switchback (J), identity, hom and path-composition
queries. Finite views additionally enumerate their objects and arrows; generative views
(lazy constructions) enumerate by tower level and arrow generation instead.
"""

import abc
import threading
from typing import Dict, FrozenSet, Hashable, Iterator, List, Optional

from foldcat._proto import Path
from foldcat._utils import sorted_ids, tuple_token
from foldcat.errors import FoldError, IllTypedPathError, PreconditionError

# guards the lazily built arrow index; reentrant because derived views index their base view
_INDEX_LOCK = threading.RLock()


class FoldedView(abc.ABC):
    @abc.abstractmethod
    def has_object(self, x) -> bool:
        pass

    @abc.abstractmethod
    def has_arrow(self, f) -> bool:
        pass

    @abc.abstractmethod
    def dom(self, f):
        pass

    @abc.abstractmethod
    def cod(self, f):
        pass

    @abc.abstractmethod
    def switchback(self, f):
        """ J(f) """

    @abc.abstractmethod
    def switchback_inverse(self, x) -> Optional[Hashable]:
        """ the unique arrow f with J(f) = x, or None """

    @abc.abstractmethod
    def identity(self, x):
        """
        Raises:
            FrontierIncompleteError, MissingEntryError
        """

    @abc.abstractmethod
    def hom(self, x, y) -> List:
        """ arrows x -> y in lexicographic order """

    @abc.abstractmethod
    def compose(self, path: Path):
        """
        Raises:
            IllTypedPathError, FrontierIncompleteError, MissingEntryError
        """

    def is_frontier(self, x) -> bool:
        return False

    def touches_frontier(self, *objects) -> bool:
        return any(self.is_frontier(x) for x in objects)

    def path(self, *arrows) -> Path:
        if not arrows:
            raise PreconditionError("path() needs at least one arrow, use Path(base) for empty paths")
        return Path(self.dom(arrows[0]), tuple(arrows))

    def compose_arrows(self, *arrows):
        return self.compose(self.path(*arrows))

    def check_path(self, path: Path):
        """
        Raises:
            IllTypedPathError: unknown arrow, or arrows not head-to-tail
        """
        if not self.has_object(path.base):
            raise IllTypedPathError(f"unknown base object {tuple_token(path.base)}")
        here = path.base
        for i, f in enumerate(path.arrows):
            if not self.has_arrow(f):
                raise IllTypedPathError(f"unknown arrow {tuple_token(f)} in {path}")
            if self.dom(f) != here:
                raise IllTypedPathError(f"arrow {i + 1} of {path} starts at {tuple_token(self.dom(f))}, "
                                        f"expected {tuple_token(here)}")
            here = self.cod(f)

    def endpoint(self, path: Path):
        return self.cod(path.arrows[-1]) if path.arrows else path.base

    def is_identity(self, f) -> bool:
        x = self.dom(f)
        if x != self.cod(f):
            return False
        try:
            return self.identity(x) == f
        except FoldError:
            return False

    def is_point(self, x) -> bool:
        """ x is not a switchback, or is the switchback of its own identity """
        pre = self.switchback_inverse(x)
        if pre is None:
            return True
        try:
            return pre == self.identity(x)
        except FoldError:
            return False


class FiniteView(FoldedView):
    @abc.abstractmethod
    def objects(self) -> List:
        pass

    @abc.abstractmethod
    def arrows(self) -> List:
        pass

    @property
    def frontier(self) -> FrozenSet:
        return frozenset()

    def is_frontier(self, x) -> bool:
        return x in self.frontier

    def _index(self):
        index = self.__dict__.get("_view_index")
        if index is not None:
            return index
        with _INDEX_LOCK:
            index = self.__dict__.get("_view_index")
            if index is not None:
                return index
            out: Dict = {}
            into: Dict = {}
            for f in self.arrows():
                out.setdefault(self.dom(f), []).append(f)
                into.setdefault(self.cod(f), []).append(f)
            index = ({k: sorted_ids(v) for k, v in out.items()},
                     {k: sorted_ids(v) for k, v in into.items()})
            self.__dict__["_view_index"] = index
        return index

    def arrows_from(self, x) -> List:
        return self._index()[0].get(x, [])

    def arrows_to(self, x) -> List:
        return self._index()[1].get(x, [])

    def hom(self, x, y) -> List:
        return [f for f in self.arrows_from(x) if self.cod(f) == y]

    def paths(self, length: int, base=None) -> Iterator[Path]:
        """ composable paths of exactly the given length, depth-first in lexicographic order """
        bases = [base] if base is not None else self.objects()
        for b in bases:
            yield from self._extend(Path(b), length)

    def _extend(self, path: Path, length: int) -> Iterator[Path]:
        if len(path) == length:
            yield path
            return
        for f in self.arrows_from(self.endpoint(path)):
            yield from self._extend(Path(path.base, path.arrows + (f,)), length)

    def paths_up_to(self, max_length: int, min_length: int = 0) -> Iterator[Path]:
        for n in range(min_length, max_length + 1):
            yield from self.paths(n)


class GenerativeView(FoldedView):
    """
    Lazy view whose carrier may be infinite. Objects are graded by tower level,
    arrows by generation (path length for free constructions). Arrows only run between
    objects reachable from base_objects() along arrows and J.
    """
    # hom() on a lazy view only looks at arrows up to this generation
    hom_generation = 8

    @abc.abstractmethod
    def base_objects(self) -> List:
        pass

    @abc.abstractmethod
    def object_level(self, x) -> int:
        pass

    @abc.abstractmethod
    def arrow_generation(self, f) -> int:
        pass

    @abc.abstractmethod
    def arrows_from_bounded(self, x, max_generation: int) -> List:
        """ arrows out of x of generation <= max_generation, lexicographic """

    def hom(self, x, y) -> List:
        return [f for f in self.arrows_from_bounded(x, self.hom_generation) if self.cod(f) == y]

    def weak_structure(self):
        """ horizontal composition and coherence data carried by the construction, if any """
        return None
