#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Horizontal composition μ_n and coherence equivalences θ

μ_n is generated from the binary hcomp table by left fold; two identities on switchback
objects compose to the identity of the switchback of their composite when the table has
no entry. θ certificates are looked up per contraction key, with an optional reflexive
fallback for keys whose two endpoints coincide.
"""

from __future__ import annotations

import concurrent.futures
import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from foldcat._presentation import Presentation
from foldcat._proto import (EquivMode, FunctorData, Path, RationalCert, Report, Status, ThetaKey, Verdict,
                            WeakStructure)
from foldcat._utils import StateBudget, tuple_token
from foldcat._view import FiniteView
from foldcat.derived import ArrowCategory, PowerStructure, power_structure
from foldcat.equivalence import EquivRelation, decide_equiv, refl_cert, verify_cert
from foldcat.errors import (FoldError, FrontierIncompleteError, IllTypedPathError,
                            MissingEntryError, MissingThetaError, PreconditionError)

logger = logging.getLogger(__name__)

AXIOMS = ("a1", "a2", "b")


def _weak(P, W: Optional[WeakStructure]) -> WeakStructure:
    if W is not None:
        return W
    if isinstance(P, Presentation):
        return P.weak_or_default()
    return WeakStructure()


def _is_path(P: FiniteView, arrows: Sequence) -> bool:
    if not all(P.has_arrow(f) for f in arrows):
        return False
    return all(P.cod(f) == P.dom(g) for f, g in zip(arrows, arrows[1:]))


def _object_composite(P: FiniteView, W: WeakStructure, x, y):
    if P.cod(x) == P.dom(y):
        return P.compose(Path(P.dom(x), (x, y)))
    return hcomp2(P, W, x, y)


def hcomp2(P: FiniteView, W: WeakStructure, x, y):
    """
    Binary horizontal composite of two cells.

    Raises:
        MissingEntryError: no table entry and the identity rule does not apply
    """
    try:
        return W.hcomp[(x, y)]
    except KeyError:
        pass
    p, q = P.switchback_inverse(P.dom(x)), P.switchback_inverse(P.dom(y))
    if p is not None and q is not None and P.is_identity(x) and P.is_identity(y):
        return P.identity(P.switchback(_object_composite(P, W, p, q)))
    raise MissingEntryError(f"no horizontal composite for ({tuple_token(x)}, {tuple_token(y)})", (x, y))


def mu_object(P: FiniteView, W: Optional[WeakStructure], objects: Tuple):
    """
    Object part of μ_n: (A,) -> 1_A for n = 0, a path -> its composite,
    cells over cells -> the hcomp fold.
    """
    W = _weak(P, W)
    if len(objects) == 1 and P.has_object(objects[0]):
        return P.identity(objects[0])
    if _is_path(P, objects):
        return P.compose(Path(P.dom(objects[0]), tuple(objects)))
    out = objects[0]
    for y in objects[1:]:
        out = hcomp2(P, W, out, y)
    return out


def mu_apply(P: FiniteView, W: Optional[WeakStructure], n: int, cells: Tuple):
    """
    Arrow part of μ_n.

    n = 0 takes the 1-tuple (a,) of an arrow a: A -> A and returns hunit(A), by default
    the identity of J(1_A). n = 1 returns the cell. n >= 2 folds hcomp from the left.

    Raises:
        MissingEntryError: missing hcomp entry, carrying the offending pair
        PreconditionError: tuple length does not match n
    """
    W = _weak(P, W)
    if n == 0:
        if len(cells) != 1:
            raise PreconditionError("μ_0 takes a single arrow")
        A = P.dom(cells[0])
        if A in W.hunit:
            return W.hunit[A]
        return P.identity(P.switchback(P.identity(A)))
    if len(cells) != n:
        raise PreconditionError(f"μ_{n} takes {n} cells, got {len(cells)}")
    out = cells[0]
    for y in cells[1:]:
        out = hcomp2(P, W, out, y)
    return out


def path_objects(P: FiniteView, path: Path) -> List:
    """ A_0 = base, A_i = cod f_i """
    objects = [path.base]
    for f in path.arrows:
        objects.append(P.cod(f))
    return objects


def contract_path(P: FiniteView, key: ThetaKey) -> Path:
    """
    <f_1..f_a, compose(f_{a+1..b}), f_{b+1..n}>; an empty block inserts 1_{A_a}

    Raises:
        PreconditionError: cut indices out of range
    """
    path, a, b = key.path, key.a, key.b
    if not 0 <= a <= b <= len(path):
        raise PreconditionError(f"cut indices must satisfy 0 <= a <= b <= {len(path)}")
    A = path_objects(P, path)
    if a == b:
        middle = P.identity(A[a])
    else:
        middle = P.compose(Path(A[a], path.arrows[a:b]))
    return Path(path.base, path.arrows[:a] + (middle,) + path.arrows[b:])


def theta_endpoints(P: FiniteView, key: ThetaKey) -> Tuple:
    return (P.switchback(P.compose(key.path)), P.switchback(P.compose(contract_path(P, key))))


def theta_lookup(P: FiniteView, W: Optional[WeakStructure], key: ThetaKey) -> RationalCert:
    """
    Raises:
        MissingThetaError: no entry, the key is withheld, or the fallback does not apply
    """
    W = _weak(P, W)
    try:
        return W.theta[key]
    except KeyError:
        pass
    if key in W.theta_withheld or W.theta_fallback != "reflexive":
        raise MissingThetaError(key)
    left, right = theta_endpoints(P, key)
    if left != right:
        raise MissingThetaError(key)
    try:
        return refl_cert(P, left)
    except PreconditionError:
        raise MissingThetaError(key) from None


def mu_functor(P: FiniteView, W: Optional[WeakStructure], power: PowerStructure) -> FunctorData:
    """ μ_n tabulated from the power structure into the arrow category; undefined entries are left out """
    W = _weak(P, W)
    object_map, arrow_map = {}, {}
    for t in power.objects():
        try:
            object_map[t] = mu_object(P, W, t)
        except FoldError:
            continue
    for a in power.arrows():
        try:
            arrow_map[a] = mu_apply(P, W, power.n, a)
        except FoldError:
            continue
    return FunctorData(power, ArrowCategory(P), object_map, arrow_map)


def validate_mu(P: FiniteView, W: Optional[WeakStructure] = None, max_arity: int = 3,
                max_path_len: int = 2, max_states: Optional[int] = None) -> Report:
    """
    For n <= max_arity: (i) typing of μ_n on arrow tuples, (ii) object map on seed paths,
    (iii) preservation of composition along vertical tuple paths of length <= max_path_len
    (interchange), (iv) switchback preservation, (v) the μ_1 and μ_0 requirements,
    and a coverage count.
    """
    W = _weak(P, W)
    report = Report()
    budget = StateBudget("validate_mu", max_states)
    C = ArrowCategory(P)
    passed = {"mu-typing": 0, "mu-object": 0, "mu-composition": 0, "mu-switchback": 0, "mu-unit": 0}

    def run(check_id, witness, fn):
        budget.spend()
        try:
            ok = fn()
        except FrontierIncompleteError:
            report.add(check_id, Status.SKIPPED_FRONTIER, **witness)
            return
        except MissingEntryError as e:
            report.add(check_id, Status.FAIL, reason="missing-hcomp", entry=e.entry, **witness)
            return
        except (IllTypedPathError, PreconditionError) as e:
            report.add(check_id, Status.FAIL, reason=str(e), **witness)
            return
        if ok:
            passed[check_id] += 1
        else:
            report.add(check_id, Status.FAIL, **witness)

    for n in range(max_arity + 1):
        power = power_structure(P, n, max_states, verify=False)
        mu = mu_functor(P, W, power)
        report.add("mu-coverage", Status.PASS, n=n, objects=len(power.objects()), arrows=len(power.arrows()),
                   defined=len(mu.arrow_map))

        for a in power.arrows():
            def typed(a=a):
                out = mu_apply(P, W, n, a)
                d = P.switchback(mu_object(P, W, power.dom(a)))
                c = P.switchback(mu_object(P, W, power.cod(a)))
                return P.has_arrow(out) and P.dom(out) == d and P.cod(out) == c
            run("mu-typing", {"n": n, "cells": list(a)}, typed)

            def keeps_switchback(a=a):
                return C.switchback(mu_apply(P, W, n, a)) == mu_object(P, W, power.switchback(a))
            run("mu-switchback", {"n": n, "cells": list(a)}, keeps_switchback)

        if n >= 1:
            for path in P.paths(n):
                run("mu-object", {"n": n, "path": path.to_dict()},
                    lambda path=path: mu_object(P, W, path.arrows) == P.compose(path))
        for vpath in power.paths_up_to(max_path_len):
            def preserves(vpath=vpath):
                lhs = mu_apply(P, W, n, power.compose(vpath))
                images = tuple(mu_apply(P, W, n, a) for a in vpath.arrows)
                rhs = C.compose(Path(mu_object(P, W, vpath.base), images))
                return lhs == rhs
            run("mu-composition", {"n": n, "base": list(vpath.base), "cells": [list(a) for a in vpath.arrows]},
                preserves)

        if n == 1:
            for a in power.arrows():
                run("mu-unit", {"n": 1, "cells": list(a)}, lambda a=a: mu_apply(P, W, 1, a) == a[0])
        if n == 0:
            for (x,) in power.objects():
                if P.is_frontier(x):
                    continue
                run("mu-unit", {"n": 0, "object": x},
                    lambda x=x: mu_apply(P, W, 0, (P.identity(x),)) == P.identity(P.switchback(P.identity(x))))

    for check_id, count in passed.items():
        report.add(check_id, Status.PASS, checked=count)
    return report


@dataclass(frozen=True)
class Instance:
    axiom: str
    path: Path
    cuts: Tuple[int, ...]
    target: Optional[Path] = None
    cells: Tuple = ()

    def witness(self) -> dict:
        doc = {"axiom": self.axiom, "path": self.path.to_dict(), "cuts": list(self.cuts)}
        if self.target is not None:
            doc["target"] = self.target.to_dict()
            doc["cells"] = list(self.cells)
        return doc


class _Outcome(Exception):
    def __init__(self, status: Status, reason: str, **extra):
        super().__init__(reason)
        self.status = status
        self.reason = reason
        self.extra = extra


def _instances(P: FiniteView, axioms: Iterable[str], max_path_len: int, max_arity: int) -> Iterable[Instance]:
    axioms = set(axioms)
    for path in P.paths_up_to(max_path_len, 1):
        n = len(path)
        cuts = [(a, b) for a in range(n + 1) for b in range(a, n + 1)]
        if "a1" in axioms:
            for (a, b), (c, d) in itertools.product(cuts, repeat=2):
                if b <= c and (a, b) != (c, d):
                    yield Instance("a1", path, (a, b, c, d))
        if "a2" in axioms:
            for (a, b), (c, d) in itertools.product(cuts, repeat=2):
                if a < b and a <= c and d <= b and (c, d) != (a, b):
                    yield Instance("a2", path, (a, b, c, d))
        if "b" in axioms and n <= max_arity:
            for target in _parallel_paths(P, path):
                try:
                    homs = [P.hom(P.switchback(f), P.switchback(g)) for f, g in zip(path.arrows, target.arrows)]
                except FoldError:
                    continue
                for cells in itertools.product(*homs):
                    for a, b in cuts:
                        yield Instance("b", path, (a, b), target, cells)


def _parallel_paths(P: FiniteView, path: Path) -> Iterable[Path]:
    choices = [[g for g in P.hom(P.dom(f), P.cod(f))] for f in path.arrows]
    for arrows in itertools.product(*choices):
        yield Path(path.base, arrows)


class CoherenceChecker:
    """ evaluates axiom instances against one presentation, weak structure and relation """

    def __init__(self, P: FiniteView, W: WeakStructure, relation: EquivRelation):
        self.P = P
        self.W = W
        self.relation = relation
        self._theta: Dict[ThetaKey, object] = {}
        self._lock = threading.Lock()

    def theta(self, key: ThetaKey):
        """ (θ)_0 of a checked certificate; the outcome is cached per key """
        with self._lock:
            cached = self._theta.get(key)
        if cached is None:
            try:
                cached = self._theta_arrow(key)
            except _Outcome as e:
                cached = e
            with self._lock:
                self._theta[key] = cached
        if isinstance(cached, _Outcome):
            raise cached
        return cached

    def _theta_arrow(self, key: ThetaKey):
        P = self.P
        try:
            cert = theta_lookup(P, self.W, key)
        except MissingThetaError:
            raise _Outcome(Status.SKIPPED_MISSING_THETA, "missing-theta", key=key.to_dict()) from None
        except FrontierIncompleteError:
            raise _Outcome(Status.SKIPPED_FRONTIER, "frontier", key=key.to_dict()) from None
        if cert.root_node.is_stub:
            raise _Outcome(Status.SKIPPED_FRONTIER, "frontier", key=key.to_dict())
        try:
            expected = theta_endpoints(P, key)
        except FrontierIncompleteError:
            raise _Outcome(Status.SKIPPED_FRONTIER, "frontier", key=key.to_dict()) from None
        if cert.pair != expected or not verify_cert(P, cert, expected).ok:
            raise _Outcome(Status.FAIL, "theta-invalid", key=key.to_dict())
        return cert.root_node.fwd

    def mu(self, n: int, cells: Tuple):
        try:
            return mu_apply(self.P, self.W, n, cells)
        except MissingEntryError as e:
            raise _Outcome(Status.FAIL, "missing-hcomp", entry=e.entry) from None

    def compose(self, *arrows):
        try:
            return self.P.compose(self.P.path(*arrows))
        except FrontierIncompleteError:
            raise _Outcome(Status.SKIPPED_FRONTIER, "frontier") from None
        except (MissingEntryError, IllTypedPathError) as e:
            raise _Outcome(Status.FAIL, "ill-typed-side", detail=str(e)) from None

    def contract(self, path: Path, a: int, b: int) -> Path:
        try:
            return contract_path(self.P, ThetaKey(path, a, b))
        except FrontierIncompleteError:
            raise _Outcome(Status.SKIPPED_FRONTIER, "frontier") from None

    def sides(self, inst: Instance) -> Tuple:
        P = self.P
        f = inst.path
        if inst.axiom == "a1":
            a, b, c, d = inst.cuts
            shift = 1 - (b - a)
            f1 = self.contract(f, a, b)
            g1 = self.contract(f, c, d)
            lhs = self.compose(self.theta(ThetaKey(f, a, b)), self.theta(ThetaKey(f1, c + shift, d + shift)))
            rhs = self.compose(self.theta(ThetaKey(f, c, d)), self.theta(ThetaKey(g1, a, b)))
            return lhs, rhs
        if inst.axiom == "a2":
            a, b, c, d = inst.cuts
            inner = self.contract(f, c, d)
            b_inner = b - (d - c) + 1
            lhs = self.compose(self.theta(ThetaKey(f, c, d)), self.theta(ThetaKey(inner, a, b_inner)))
            q = Path(path_objects(P, f)[a], f.arrows[a:b])
            outer = self.contract(f, a, b)
            cells = tuple(P.identity(P.switchback(x)) for x in outer.arrows[:a]) \
                + (self.theta(ThetaKey(q, c - a, d - a)),) \
                + tuple(P.identity(P.switchback(x)) for x in outer.arrows[a + 1:])
            rhs = self.compose(self.theta(ThetaKey(f, a, b)), self.mu(len(cells), cells))
            return lhs, rhs
        a, b = inst.cuts
        cells = inst.cells
        if a == b:
            block = self.mu(0, (P.identity(path_objects(P, f)[a]),))
        else:
            block = self.mu(b - a, cells[a:b])
        inner = cells[:a] + (block,) + cells[b:]
        lhs = self.compose(self.theta(ThetaKey(f, a, b)), self.mu(len(inner), inner))
        rhs = self.compose(self.mu(len(cells), cells), self.theta(ThetaKey(inst.target, a, b)))
        return lhs, rhs

    def evaluate(self, inst: Instance) -> Tuple[Status, dict]:
        try:
            try:
                lhs, rhs = self.sides(inst)
            except FrontierIncompleteError:
                raise _Outcome(Status.SKIPPED_FRONTIER, "frontier") from None
            if lhs == rhs:
                return Status.PASS, {}
            try:
                left, right = self.P.switchback(lhs), self.P.switchback(rhs)
            except FrontierIncompleteError:
                raise _Outcome(Status.SKIPPED_FRONTIER, "frontier") from None
            verdict = self.relation.verdict(left, right)
            if verdict == Verdict.EQUIVALENT:
                return Status.PASS, {}
            if verdict == Verdict.FRONTIER:
                raise _Outcome(Status.SKIPPED_FRONTIER, "frontier")
            raise _Outcome(Status.FAIL, "not-equivalent", lhs=lhs, rhs=rhs)
        except FoldError as e:
            return Status.FAIL, {"reason": "undefined", "detail": str(e)}
        except _Outcome as e:
            return e.status, dict(e.extra, reason=e.reason)


def check_coherence(P: FiniteView, W: Optional[WeakStructure] = None, axioms: Iterable[str] = AXIOMS,
                    max_path_len: int = 4, max_arity: int = 3, relation: Optional[EquivRelation] = None,
                    mode: EquivMode = EquivMode.OPTIMISTIC, workers: Optional[int] = None,
                    max_states: Optional[int] = None) -> Report:
    """
    Check every a1 (disjoint cuts), a2 (nested cuts) and b (naturality in cells) instance on
    paths up to max_path_len. Both sides are composed in P and compared through the
    equivalence relation on their switchbacks.

    Skipped instances are aggregated per axiom, arity and status with a sample witness.

    Raises:
        PreconditionError: unknown axiom name
        BudgetExceededError: more than max_states instances
    """
    requested = set(axioms)
    unknown = requested - set(AXIOMS)
    if unknown:
        raise PreconditionError(f"unknown axioms: {sorted(unknown)}")
    axioms = [a for a in AXIOMS if a in requested]
    W = _weak(P, W)
    if relation is None:
        relation = decide_equiv(P, mode)
    checker = CoherenceChecker(P, W, relation)
    budget = StateBudget("check_coherence", max_states)
    instances = []
    for inst in _instances(P, axioms, max_path_len, max_arity):
        budget.spend()
        instances.append(inst)
    logger.debug("checking %d coherence instances", len(instances))

    if workers and workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(checker.evaluate, instances))
    else:
        outcomes = [checker.evaluate(inst) for inst in instances]

    report = Report()
    passed = {a: 0 for a in axioms}
    total = {a: 0 for a in axioms}
    skipped: Dict[Tuple, List] = {}
    for inst, (status, extra) in zip(instances, outcomes):
        total[inst.axiom] += 1
        if status == Status.PASS:
            passed[inst.axiom] += 1
        elif status == Status.FAIL:
            report.add(f"coherence-{inst.axiom}", Status.FAIL, **inst.witness(), **extra)
        else:
            group = skipped.setdefault((inst.axiom, len(inst.path), status), [0, inst, extra])
            group[0] += 1
    for (axiom, n, status), (count, sample, extra) in skipped.items():
        report.add(f"coherence-{axiom}", status, n=n, count=count, sample=sample.witness(), reason=extra["reason"])
    for axiom in axioms:
        report.add(f"coherence-{axiom}", Status.PASS, checked=passed[axiom], instances=total[axiom])
    if any(f.status != Status.PASS for f in report.findings):
        logger.warning("coherence check left %d findings that are not passes",
                       sum(1 for f in report.findings if f.status != Status.PASS))
    return report
