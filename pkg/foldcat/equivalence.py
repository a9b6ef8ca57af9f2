#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Coinductive object equivalence

Two objects X, Y are equivalent when there are arrows f: X -> Y and g: Y -> X such that
J(fg) ~ J(1_X) and J(gf) ~ J(1_Y), where the obligations regress forever. The relation is
computed as a greatest fixpoint; witnesses are rational certificates, finite graphs whose
nodes carry (pair, fwd, bwd, child0, child1).
"""

from __future__ import annotations

import collections
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import deprecation

from foldcat._proto import (BruteForceOutcome, BruteForceResult, CertNode, EquivMode, FunctorData, Path,
                            RationalCert, Report, Status, Verdict)
from foldcat._schema import CERTIFICATE_SCHEMA, load_document
from foldcat._utils import StateBudget, canonical_json, sorted_ids, tuple_token
from foldcat._version import __version__
from foldcat._view import FiniteView, FoldedView
from foldcat.errors import (CertificateError, FoldError, FrontierIncompleteError,
                            MissingEntryError, PreconditionError)

logger = logging.getLogger(__name__)

Pair = Tuple


def child_pairs(view: FoldedView, x, y, fwd, bwd) -> Tuple[Pair, Pair]:
    """
    (J(fwd bwd), J(1_x)) and (J(bwd fwd), J(1_y))

    Raises:
        FrontierIncompleteError, MissingEntryError, IllTypedPathError
    """
    c0 = (view.switchback(view.compose(Path(x, (fwd, bwd)))), view.switchback(view.identity(x)))
    c1 = (view.switchback(view.compose(Path(y, (bwd, fwd)))), view.switchback(view.identity(y)))
    return c0, c1


def verify_cert(view: FoldedView, cert: RationalCert, expected: Optional[Pair] = None) -> Report:
    """
    Check every reachable node once: objects exist, fwd: X -> Y and bwd: Y -> X,
    and the children carry the pairs the composites dictate.
    Frontier stubs and nodes whose composites were cut are skipped-frontier.
    """
    report = Report()
    if expected is not None and tuple(cert.pair) != tuple(expected):
        report.add("cert-root", Status.FAIL, expected=list(expected), actual=list(cert.pair))

    checked = 0
    seen = {cert.root}
    queue = collections.deque([cert.root])
    while queue:
        node = cert.node(queue.popleft())
        for child in (node.child0, node.child1):
            if child is not None and cert.has_node(child) and child not in seen:
                seen.add(child)
                queue.append(child)
        reason = _node_problem(view, cert, node)
        if reason is None:
            checked += 1
        elif reason == "frontier":
            report.add("cert-node", Status.SKIPPED_FRONTIER, node=node.id, left=node.left, right=node.right)
        else:
            report.add("cert-node", Status.FAIL, node=node.id, left=node.left, right=node.right, reason=reason)
    report.add("cert-node", Status.PASS, checked=checked)
    return report


def _node_problem(view: FoldedView, cert: RationalCert, node: CertNode) -> Optional[str]:
    x, y = node.pair
    if not view.has_object(x) or not view.has_object(y):
        return "unknown object"
    if node.is_stub:
        return "frontier" if view.touches_frontier(x, y) else "stub away from the frontier"
    for name in ("child0", "child1"):
        child = getattr(node, name)
        if child is None or not cert.has_node(child):
            return f"missing {name}"
    f, g = node.fwd, node.bwd
    if not (view.has_arrow(f) and view.has_arrow(g)):
        return "unknown arrow"
    if view.dom(f) != x or view.cod(f) != y:
        return "fwd is not typed left -> right"
    if view.dom(g) != y or view.cod(g) != x:
        return "bwd is not typed right -> left"
    try:
        c0, c1 = child_pairs(view, x, y, f, g)
    except FrontierIncompleteError:
        return "frontier"
    except FoldError as e:
        return f"composite undefined: {e}"
    if cert.node(node.child0).pair != c0:
        return "child0 pair mismatch"
    if cert.node(node.child1).pair != c1:
        return "child1 pair mismatch"
    return None


@dataclass(frozen=True)
class EquivRelation:
    pairs: FrozenSet[Pair]
    mode: EquivMode
    choice: Dict[Pair, Tuple] = field(default_factory=dict)
    assumed: FrozenSet[Pair] = frozenset()
    iterations: int = 0

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted_ids(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def verdict(self, a, b) -> Verdict:
        if (a, b) in self.assumed:
            return Verdict.FRONTIER
        if (a, b) in self.pairs:
            return Verdict.EQUIVALENT
        return Verdict.NOT_EQUIVALENT

    @deprecation.deprecated(deprecated_in="0.1.0",
                            removed_in="1.0.0",
                            current_version=__version__,
                            details="use (a, b) in relation or relation.verdict(a, b) instead")
    def contains(self, a, b) -> bool:
        return (a, b) in self


@dataclass(frozen=True)
class _Candidate:
    fwd: str
    bwd: str
    c0: Optional[Pair]
    c1: Optional[Pair]

    def supported(self, pairs) -> bool:
        """ children beyond the frontier (None) are not refuted """
        return (self.c0 is None or self.c0 in pairs) and (self.c1 is None or self.c1 in pairs)


def _candidates(view: FoldedView, x, y) -> List[_Candidate]:
    out = []
    for f in view.hom(x, y):
        for g in view.hom(y, x):
            try:
                c0, c1 = child_pairs(view, x, y, f, g)
            except FrontierIncompleteError:
                c0 = c1 = None
            except MissingEntryError:
                continue
            out.append(_Candidate(f, g, c0, c1))
    return out


def decide_equiv(P: FiniteView, mode: EquivMode = EquivMode.OPTIMISTIC) -> EquivRelation:
    """
    Greatest fixpoint of the refinement R_{k+1} = {(X,Y) in R_k | some f, g support it in R_k}
    starting from all object pairs.

    Raises:
        PreconditionError: exact mode on a presentation with a frontier
    """
    mode = EquivMode(mode)
    if mode == EquivMode.EXACT and P.frontier:
        raise PreconditionError("exact mode needs a presentation without frontier")
    objects = P.objects()
    assumed = frozenset((x, y) for x in objects for y in objects if P.touches_frontier(x, y))
    candidates = {(x, y): _candidates(P, x, y) for x in objects for y in objects}
    pairs = set(candidates)
    iterations = 0
    while True:
        iterations += 1
        kept = {p for p in pairs if p in assumed or any(c.supported(pairs) for c in candidates[p])}
        logger.debug("gfp iteration %d: %d -> %d pairs", iterations, len(pairs), len(kept))
        if kept == pairs:
            break
        pairs = kept

    choice = {}
    for p in pairs:
        determined = [c for c in candidates[p] if c.c0 is not None and c.supported(pairs)]
        usable = determined or [c for c in candidates[p] if c.supported(pairs)]
        if usable:
            choice[p] = (usable[0].fwd, usable[0].bwd)
    if assumed:
        logger.warning("%d object pairs touch the frontier and are kept unrefuted", len(assumed))
    return EquivRelation(frozenset(pairs), mode, choice, assumed, iterations)


def renumber(cert: RationalCert) -> RationalCert:
    """ breadth-first renaming n0, n1, ... from the root; unreachable nodes are dropped """
    names = {cert.root: "n0"}
    order = [cert.root]
    queue = collections.deque([cert.root])
    while queue:
        node = cert.node(queue.popleft())
        for child in (node.child0, node.child1):
            if child is not None and child not in names:
                names[child] = f"n{len(names)}"
                order.append(child)
                queue.append(child)
    nodes = []
    for old in order:
        n = cert.node(old)
        nodes.append(CertNode(names[old], n.left, n.right, n.fwd, n.bwd,
                              names.get(n.child0), names.get(n.child1)))
    return RationalCert("n0", tuple(nodes))


def reroot(cert: RationalCert, node_id) -> RationalCert:
    return renumber(RationalCert(node_id, cert.nodes))


def assemble_cert(root: Pair, expand: Callable[[Pair], Optional[Tuple]]) -> RationalCert:
    """
    Breadth-first certificate with one node per pair. expand(pair) returns
    (fwd, bwd, child0 pair, child1 pair), or None for a frontier stub.
    """
    names = {root: "n0"}
    queue = collections.deque([root])
    nodes = []
    while queue:
        pair = queue.popleft()
        step = expand(pair)
        if step is None:
            nodes.append(CertNode(names[pair], pair[0], pair[1]))
            continue
        fwd, bwd, c0, c1 = step
        for c in (c0, c1):
            if c not in names:
                names[c] = f"n{len(names)}"
                queue.append(c)
        nodes.append(CertNode(names[pair], pair[0], pair[1], fwd, bwd, names[c0], names[c1]))
    return RationalCert("n0", tuple(nodes))


def extract_cert(P: FiniteView, relation: EquivRelation, a, b) -> RationalCert:
    """
    Certificate for (a, b) read off the relation's stored choices. Pairs kept only
    because they touch the frontier become stubs.

    Raises:
        PreconditionError: (a, b) is not in the relation
    """
    if (a, b) not in relation:
        raise PreconditionError(f"({tuple_token(a)}, {tuple_token(b)}) is not in the relation")

    def expand(pair):
        if pair in relation.assumed or pair not in relation.choice:
            return None
        f, g = relation.choice[pair]
        try:
            c0, c1 = child_pairs(P, pair[0], pair[1], f, g)
        except FrontierIncompleteError:
            return None
        return f, g, c0, c1

    return assemble_cert((a, b), expand)


def brute_force_equiv(P: FiniteView, a, b, max_nodes: int, max_states: Optional[int] = None) -> BruteForceResult:
    """
    Depth-first search over certificates with one node per object pair, choices tried in
    lexicographic order and obligations expanded first-in-first-out.

    Raises:
        BudgetExceededError: more than max_states choices tried
    """
    if P.touches_frontier(a, b):
        return BruteForceResult(BruteForceOutcome.FRONTIER)
    budget = StateBudget("brute_force_equiv", max_states)
    candidate_cache: Dict[Pair, List[_Candidate]] = {}

    def candidates(pair):
        if pair not in candidate_cache:
            candidate_cache[pair] = [c for c in _candidates(P, *pair) if c.c0 is not None]
        return candidate_cache[pair]

    assignment: Dict[Pair, Optional[_Candidate]] = {}

    def search(pending: Tuple[Pair, ...]) -> bool:
        while pending and pending[0] in assignment:
            pending = pending[1:]
        if not pending:
            return True
        pair, rest = pending[0], pending[1:]
        if len(assignment) >= max_nodes:
            return False
        if P.touches_frontier(*pair):
            assignment[pair] = None
            if search(rest):
                return True
            del assignment[pair]
            return False
        for cand in candidates(pair):
            budget.spend()
            assignment[pair] = cand
            if search(rest + (cand.c0, cand.c1)):
                return True
            del assignment[pair]
        return False

    if not search(((a, b),)):
        return BruteForceResult(BruteForceOutcome.NO_WITHIN_BOUND, None, budget.used)

    def expand(pair):
        cand = assignment[pair]
        return None if cand is None else (cand.fwd, cand.bwd, cand.c0, cand.c1)

    cert = assemble_cert((a, b), expand)
    if not verify_cert(P, cert, (a, b)).ok:
        raise CertificateError("enumerated certificate failed verification")
    return BruteForceResult(BruteForceOutcome.YES, cert, budget.used)


# certificate transforms

def refl_cert(view: FoldedView, A) -> RationalCert:
    """
    Identity tower A, J(1_A), J(1_{J(1_A)}), ... with fwd = bwd = identity, closed by a
    back-edge or a frontier stub.

    Raises:
        PreconditionError: an identity on the tower is not idempotent
    """
    def expand(pair):
        x = pair[0]
        if view.is_frontier(x):
            return None
        one = view.identity(x)
        if view.compose(Path(x, (one, one))) != one:
            raise PreconditionError(f"1_{tuple_token(x)} is not idempotent, reflexivity needs theta data")
        nxt = view.switchback(one)
        return one, one, (nxt, nxt), (nxt, nxt)

    return assemble_cert((A, A), expand)


def sym_cert(cert: RationalCert) -> RationalCert:
    """ swap the root only: (Y, X) with fwd/bwd and children exchanged """
    root = cert.root_node
    new_id = ("sym", root.id)
    if root.is_stub:
        new_root = CertNode(new_id, root.right, root.left)
    else:
        new_root = CertNode(new_id, root.right, root.left, root.bwd, root.fwd, root.child1, root.child0)
    return renumber(RationalCert(new_id, cert.nodes + (new_root,)))


def pair_cert(power: FoldedView, certs: Sequence[RationalCert]) -> RationalCert:
    """
    Componentwise product of certificates, a certificate in the power structure.
    A product node is a stub when any component is.

    Raises:
        PreconditionError: arity mismatch, or the root pair is not a power-structure object
    """
    if not certs:
        raise PreconditionError("pair_cert needs at least one certificate")
    root = tuple(c.root for c in certs)
    names = {root: "n0"}
    queue = collections.deque([root])
    nodes = []
    while queue:
        key = queue.popleft()
        parts = [c.node(i) for c, i in zip(certs, key)]
        left = tuple(p.left for p in parts)
        right = tuple(p.right for p in parts)
        if any(p.is_stub for p in parts):
            nodes.append(CertNode(names[key], left, right))
            continue
        children = []
        for attr in ("child0", "child1"):
            child = tuple(getattr(p, attr) for p in parts)
            if child not in names:
                names[child] = f"n{len(names)}"
                queue.append(child)
            children.append(names[child])
        nodes.append(CertNode(names[key], left, right, tuple(p.fwd for p in parts),
                              tuple(p.bwd for p in parts), *children))
    cert = RationalCert("n0", tuple(nodes))
    for x in cert.pair:
        if not power.has_object(x):
            raise PreconditionError(f"{tuple_token(x)} is not an object of the power structure")
    return cert


def push_cert(F: FunctorData, cert: RationalCert) -> RationalCert:
    """
    Image of a certificate under a functor, node by node.

    Raises:
        MissingEntryError: the functor has no image for a node's data
    """
    nodes = []
    for n in cert.nodes:
        fwd = None if n.fwd is None else F.arr(n.fwd)
        bwd = None if n.bwd is None else F.arr(n.bwd)
        nodes.append(CertNode(n.id, F.obj(n.left), F.obj(n.right), fwd, bwd, n.child0, n.child1))
    return renumber(RationalCert(cert.root, tuple(nodes)))


def transform_cert(kind: str, *args) -> RationalCert:
    """
    transform_cert("refl", view, A)
    transform_cert("sym", cert)
    transform_cert("pair", power, [cert, ...])
    transform_cert("push", functor, cert)
    """
    transforms = {"refl": refl_cert, "sym": sym_cert, "pair": pair_cert, "push": push_cert}
    try:
        fn = transforms[kind]
    except KeyError:
        raise PreconditionError(f"unknown transform {kind!r}") from None
    return fn(*args)


def to_arrow_category(P: FoldedView, cert: RationalCert) -> RationalCert:
    """
    Read a certificate between J-objects as a certificate in the arrow category.

    Raises:
        PreconditionError: a node object is not in J's range
    """
    nodes = []
    for n in cert.nodes:
        left, right = P.switchback_inverse(n.left), P.switchback_inverse(n.right)
        if left is None or right is None:
            raise PreconditionError(f"node {n.id} relates objects outside J's range")
        nodes.append(CertNode(n.id, left, right, n.fwd, n.bwd, n.child0, n.child1))
    return RationalCert(cert.root, tuple(nodes))


def from_arrow_category(P: FoldedView, cert: RationalCert) -> RationalCert:
    nodes = tuple(CertNode(n.id, P.switchback(n.left), P.switchback(n.right), n.fwd, n.bwd, n.child0, n.child1)
                  for n in cert.nodes)
    return RationalCert(cert.root, nodes)


def cert_to_json(cert: RationalCert) -> str:
    return canonical_json(cert.to_dict())


def cert_from_json(text: str, source: Optional[str] = None) -> RationalCert:
    """
    Raises:
        PresentationError: syntax or schema error
        DuplicateIdError, DanglingReferenceError
    """
    return RationalCert.from_dict(load_document(text, CERTIFICATE_SCHEMA, source), source)


@dataclass(frozen=True)
class Link:
    """ an equivalence arrow with its inverse and the two certificates J(fg) ~ J(1), J(gf) ~ J(1) """
    fwd: str
    bwd: str
    cert0: RationalCert
    cert1: RationalCert

    @classmethod
    def from_cert(cls, cert: RationalCert) -> Link:
        root = cert.root_node
        if root.is_stub:
            raise PreconditionError("a frontier stub carries no arrows")
        return cls(root.fwd, root.bwd, reroot(cert, root.child0), reroot(cert, root.child1))

    def swapped(self) -> Link:
        return Link(self.bwd, self.fwd, self.cert1, self.cert0)


def require_verified(view: FoldedView, cert: RationalCert, expected: Optional[Pair] = None,
                     what: str = "certificate") -> RationalCert:
    """
    Raises:
        CertificateError: verification reported a failure
    """
    report = verify_cert(view, cert, expected)
    if not report.ok:
        first = report.failures()[0]
        raise CertificateError(f"{what} failed verification: {first.witness}")
    return cert


def equivalent_pairs(relation: EquivRelation, objects: Sequence) -> Iterator[Pair]:
    for x, y in itertools.product(objects, repeat=2):
        if (x, y) in relation:
            yield x, y
