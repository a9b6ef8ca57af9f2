#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Constructive witnesses: substitution under μ, chains of equivalence arrows, cancellation

CertificateBuilder keeps a pool mapping object pairs to the (fwd, bwd) arrows chosen for
them, or to a frontier stub. Every rule sets the entry of its result pair at once and
queues obligations for the children; obligations run first-in-first-out, so the pairs a
rule reads were settled by earlier rules. Output certificates are read off the pool and
verified again.
"""

from __future__ import annotations

import collections
import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

from foldcat._proto import FunctorData, Path, RationalCert, ThetaKey, WeakStructure
from foldcat._utils import tuple_token
from foldcat._view import FiniteView
from foldcat.derived import power_structure
from foldcat.equivalence import (Link, assemble_cert, child_pairs, from_arrow_category, pair_cert, push_cert,
                                 require_verified, to_arrow_category)
from foldcat.errors import CertificateError, FrontierIncompleteError, PreconditionError
from foldcat.weak import _weak, mu_apply, mu_object, theta_endpoints, theta_lookup

logger = logging.getLogger(__name__)

Pair = Tuple


class CertificateBuilder:
    def __init__(self, P: FiniteView, W: Optional[WeakStructure] = None):
        self.P = P
        self.W = _weak(P, W)
        self.pool: Dict[Pair, Optional[Tuple]] = {}
        self._queue = collections.deque()

    # obligations

    def _defer(self, target: Pair, fn: Callable[[], None]):
        self._queue.append((target, fn))

    def _settle(self, target: Pair, fn: Callable[[], None]):
        if target in self.pool:
            return
        try:
            fn()
        except FrontierIncompleteError:
            if not self.P.touches_frontier(*target):
                raise
            self.pool[target] = None

    def drain(self):
        while self._queue:
            target, fn = self._queue.popleft()
            self._settle(target, fn)

    def _children(self, pair: Pair, choice: Tuple) -> Optional[Tuple[Pair, Pair]]:
        try:
            return child_pairs(self.P, pair[0], pair[1], *choice)
        except FrontierIncompleteError:
            return None

    def _entry(self, pair: Pair):
        try:
            return self.pool[pair]
        except KeyError:
            raise CertificateError(f"pair {tuple_token(pair)} has no supporting arrows yet") from None

    def _stub_or_raise(self, target: Pair, why: str):
        if self.P.touches_frontier(*target):
            self.pool[target] = None
            return target
        raise FrontierIncompleteError(f"{why} for {tuple_token(target)}")

    # rules

    def refl(self, x) -> Pair:
        """ identity tower from x; a unit that is not strict is repaired with theta(<x;1_x>,1,1) """
        P = self.P
        start = x
        while (x, x) not in self.pool:
            if P.is_frontier(x):
                self.pool[(x, x)] = None
                break
            one = P.identity(x)
            self.pool[(x, x)] = (one, one)
            if P.compose(Path(x, (one, one))) == one:
                x = P.switchback(one)
                continue
            expected = (P.switchback(P.compose(Path(x, (one, one)))), P.switchback(one))
            got = self.sym(self.theta(ThetaKey(Path(x, (one,)), 1, 1)))
            if got != expected:
                raise CertificateError(f"unit repair at {tuple_token(x)} produced {tuple_token(got)}")
        return (start, start)

    def import_cert(self, cert: RationalCert) -> Pair:
        for node in cert.nodes:
            if node.pair not in self.pool:
                self.pool[node.pair] = None if node.is_stub else (node.fwd, node.bwd)
        return cert.pair

    def theta(self, key: ThetaKey) -> Pair:
        """
        Raises:
            MissingThetaError, CertificateError
        """
        left, right = theta_endpoints(self.P, key)
        if left == right:
            return self.refl(left)
        cert = theta_lookup(self.P, self.W, key)
        require_verified(self.P, cert, (left, right), what=f"theta certificate {key}")
        return self.import_cert(cert)

    def sym(self, pair: Pair) -> Pair:
        x, y = pair
        if x == y:
            return self.refl(x)
        target = (y, x)
        if target not in self.pool:
            entry = self._entry(pair)
            self.pool[target] = None if entry is None else (entry[1], entry[0])
        return target

    def trans(self, p1: Pair, p2: Pair) -> Pair:
        (x, y), (y2, z) = p1, p2
        if y != y2:
            raise PreconditionError(f"cannot chain {tuple_token(p1)} and {tuple_token(p2)}")
        if x == y:
            return p2
        if y == z:
            return p1
        target = (x, z)
        if target in self.pool:
            return target
        e1, e2 = self._entry(p1), self._entry(p2)
        if e1 is None or e2 is None:
            return self._stub_or_raise(target, "chaining through a frontier stub")
        (f1, g1), (f2, g2) = e1, e2
        P = self.P
        try:
            F = P.compose(Path(x, (f1, f2)))
            G = P.compose(Path(z, (g2, g1)))
        except FrontierIncompleteError:
            return self._stub_or_raise(target, "composite beyond the frontier")
        self.pool[target] = (F, G)
        real = self._children(target, (F, G))
        mids = (self._children(p1, e1), self._children(p2, e2))
        if real is None or None in mids:
            return target
        (p1c0, p1c1), (p2c0, p2c1) = mids
        self._defer(real[0], lambda: self._eliminate_pair(real[0], f1, f2, g2, g1, p2c0, p1c0))
        self._defer(real[1], lambda: self._eliminate_pair(real[1], g2, g1, f1, f2, p1c1, p2c1))
        return target

    def _eliminate_pair(self, target: Pair, x1, x2, y2, y1, mid: Pair, end: Pair):
        """ J(<<x1,x2>,<y2,y1>>) ~ J(1) through the middle link mid and the outer link end """
        P = self.P
        base = P.dom(x1)
        F = P.compose(Path(base, (x1, x2)))
        w = Path(base, (x1, x2, y2, y1))
        steps = [
            self.sym(self.theta(ThetaKey(Path(base, (F, y2, y1)), 1, 3))),
            self.sym(self.theta(ThetaKey(w, 0, 2))),
            self.theta(ThetaKey(w, 1, 3)),
            self.cong([self.refl(P.switchback(x1)), mid, self.refl(P.switchback(y1))]),
            self.sym(self.theta(ThetaKey(Path(base, (x1, y1)), 1, 1))),
            end,
        ]
        got = self.chain(steps)
        if got != target:
            raise CertificateError(f"transitivity produced {tuple_token(got)}, expected {tuple_token(target)}")

    def chain(self, steps: Sequence[Pair]) -> Pair:
        """ compose head-to-tail pairs; diagonal steps are dropped """
        for a, b in zip(steps, steps[1:]):
            if a[1] != b[0]:
                raise CertificateError(f"chain breaks between {tuple_token(a)} and {tuple_token(b)}")
        kept = [s for s in steps if s[0] != s[1]]
        if not kept:
            return self.refl(steps[0][0])
        acc = kept[-1]
        for s in reversed(kept[:-1]):
            acc = self.trans(s, acc)
        return acc

    def cong(self, pairs: Sequence[Pair]) -> Pair:
        """
        μ applied to pairs of switchback objects: (J μ(x...), J μ(y...)) with
        x_i = J^-1(left_i), y_i = J^-1(right_i)
        """
        if len(pairs) == 1:
            return tuple(pairs[0])
        target = self._cong_target(pairs)
        self._settle(target, lambda: self._cong_at(target, pairs))
        return target

    def _cong_target(self, pairs: Sequence[Pair]) -> Pair:
        P = self.P
        xs = tuple(P.switchback_inverse(l) for l, _ in pairs)
        ys = tuple(P.switchback_inverse(r) for _, r in pairs)
        if None in xs or None in ys:
            raise PreconditionError("substitution needs pairs of switchback objects")
        return (P.switchback(mu_object(P, self.W, xs)), P.switchback(mu_object(P, self.W, ys)))

    def _cong_at(self, target: Pair, pairs: Sequence[Pair]):
        if target in self.pool or len(pairs) == 1:
            return
        entries = [self._entry(p) for p in pairs]
        if any(e is None for e in entries):
            self._stub_or_raise(target, "substitution of a frontier stub")
            return
        n = len(pairs)
        fwd = mu_apply(self.P, self.W, n, tuple(e[0] for e in entries))
        bwd = mu_apply(self.P, self.W, n, tuple(e[1] for e in entries))
        self.pool[target] = (fwd, bwd)
        real = self._children(target, (fwd, bwd))
        parts = [self._children(p, e) for p, e in zip(pairs, entries)]
        if real is None or None in parts:
            return
        for k in (0, 1):
            sub = [c[k] for c in parts]
            predicted = self._cong_target(sub)
            if predicted != real[k]:
                raise CertificateError(f"μ does not preserve the children: {tuple_token(predicted)} "
                                       f"!= {tuple_token(real[k])}")
            self._defer(real[k], lambda sub=sub, goal=real[k]: self._cong_at(goal, sub))

    # output

    def certificate(self, root: Pair) -> RationalCert:
        self.drain()

        def expand(pair):
            entry = self._entry(pair)
            if entry is None:
                return None
            children = self._children(pair, entry)
            if children is None:
                return None
            for c in children:
                self._entry(c)
            return entry[0], entry[1], children[0], children[1]

        cert = assemble_cert(tuple(root), expand)
        logger.debug("built certificate for %s with %d nodes", tuple_token(tuple(root)), len(cert))
        return require_verified(self.P, cert, tuple(root), what="built certificate")


def lemma_a_cert(P: FiniteView, W: Optional[WeakStructure], fs: Path, gs: Path,
                 certs: Sequence[RationalCert], max_states: Optional[int] = None) -> RationalCert:
    """
    From Jf_k ~ Jg_k for every k, a certificate for J(f_1...f_n) ~ J(g_1...g_n):
    the certificates are read in the arrow category, paired in the power structure C^[n],
    pushed through μ_n and read back as switchbacks.

    Raises:
        PreconditionError: lengths differ or the paths are not composable
        MissingEntryError: μ is undefined on a needed cell tuple
        CertificateError: an input or the result fails verification
    """
    W = _weak(P, W)
    n = len(fs)
    if len(gs) != n or len(certs) != n or n == 0:
        raise PreconditionError("lemma_a_cert needs two paths and one certificate per position")
    P.check_path(fs)
    P.check_path(gs)
    for k, (f, g, c) in enumerate(zip(fs.arrows, gs.arrows, certs)):
        require_verified(P, c, (P.switchback(f), P.switchback(g)), what=f"certificate {k + 1}")
    if n == 1:
        return certs[0]

    power = power_structure(P, n, max_states, verify=False)
    product = pair_cert(power, [to_arrow_category(P, c) for c in certs])
    require_verified(power, product, what="paired certificate")

    object_map, arrow_map = {}, {}
    for node in product.nodes:
        for x in node.pair:
            if x not in object_map:
                object_map[x] = mu_object(P, W, x)
        for a in (node.fwd, node.bwd):
            if a is not None and a not in arrow_map:
                arrow_map[a] = mu_apply(P, W, n, a)
    mu = FunctorData(power, None, object_map, arrow_map)
    result = from_arrow_category(P, push_cert(mu, product))
    expected = (P.switchback(P.compose(fs)), P.switchback(P.compose(gs)))
    return require_verified(P, result, expected, what="substituted certificate")


def chain_cert(P: FiniteView, W: Optional[WeakStructure], links: Sequence[Link], base=None) -> RationalCert:
    """
    X_0 ~ X_n from equivalence arrows f_i: X_{i-1} -> X_i with inverses g_i. The root uses
    (f_1...f_n, g_n...g_1); its obligations are discharged by rebracketing with θ and
    eliminating f_i g_i from the middle outwards.

    Raises:
        PreconditionError: links do not chain, or an empty chain without base
        MissingThetaError: a needed coherence certificate is absent
        CertificateError
    """
    builder = CertificateBuilder(P, W)
    if not links:
        if base is None:
            raise PreconditionError("an empty chain needs a base object")
        return builder.certificate(builder.refl(base))
    for link in links:
        require_verified(P, link.cert0, what="link certificate")
        require_verified(P, link.cert1, what="link certificate")
    objects = [P.dom(links[0].fwd)]
    for i, link in enumerate(links):
        if P.dom(link.fwd) != objects[-1]:
            raise PreconditionError(f"link {i + 1} does not start at {tuple_token(objects[-1])}")
        objects.append(P.cod(link.fwd))

    if len(links) == 1:
        link = links[0]
        root = (objects[0], objects[1])
        builder.pool.setdefault(root, (link.fwd, link.bwd))
        builder.import_cert(link.cert0)
        builder.import_cert(link.cert1)
        return builder.certificate(root)

    for link in links:
        builder.import_cert(link.cert0)
        builder.import_cert(link.cert1)
    F = P.compose(Path(objects[0], tuple(l.fwd for l in links)))
    G = P.compose(Path(objects[-1], tuple(l.bwd for l in reversed(links))))
    root = (objects[0], objects[-1])
    if root not in builder.pool:
        builder.pool[root] = (F, G)
        c0, c1 = child_pairs(P, root[0], root[1], F, G)
        backward = [l.swapped() for l in reversed(links)]
        builder._defer(c0, lambda: _check(builder, c0, _eliminate_links(builder, links, F, G)))
        builder._defer(c1, lambda: _check(builder, c1, _eliminate_links(builder, backward, G, F)))
    return builder.certificate(root)


def _check(builder: CertificateBuilder, target: Pair, got: Pair):
    if got != target:
        raise CertificateError(f"chain produced {tuple_token(got)}, expected {tuple_token(target)}")


def _eliminate_links(builder: CertificateBuilder, links: Sequence[Link], F, G) -> Pair:
    """ J(<F,G>) ~ J(1_{X_0}) for F = f_1...f_n, G = g_n...g_1 """
    P = builder.P
    n = len(links)
    base = P.dom(links[0].fwd)
    fs = [l.fwd for l in links]
    gs = [l.bwd for l in reversed(links)]

    def word(i):
        return Path(base, tuple(fs[:i]) + tuple(gs[n - i:]))

    steps = [
        builder.sym(builder.theta(ThetaKey(Path(base, (F,) + tuple(gs)), 1, n + 1))),
        builder.sym(builder.theta(ThetaKey(word(n), 0, n))),
    ]
    for i in range(n, 0, -1):
        steps.append(builder.theta(ThetaKey(word(i), i - 1, i + 1)))
        middle = links[i - 1].cert0.pair
        parts = [builder.refl(P.switchback(f)) for f in fs[:i - 1]] + [middle] \
            + [builder.refl(P.switchback(g)) for g in gs[n - i + 1:]]
        steps.append(builder.cong(parts))
        steps.append(builder.sym(builder.theta(ThetaKey(word(i - 1), i - 1, i - 1))))
    return builder.chain(steps)


def cancel_cert(P: FiniteView, W: Optional[WeakStructure], link: Link, f, g, premise: RationalCert,
                side: str = "left") -> RationalCert:
    """
    Left: u: A -> B with inverse v, f: B -> C, g: A -> C and J(uf) ~ J(g) give J(f) ~ J(vg),
    through f ~ 1_B f ~ (vu) f ~ v(uf) ~ vg.
    Right: f: C -> A, g: C -> B and J(fu) ~ J(g) give J(f) ~ J(gv).

    Raises:
        PreconditionError: arrows are not typed as above
        MissingThetaError, MissingEntryError, CertificateError
    """
    u, v = link.fwd, link.bwd
    A, B = P.dom(u), P.cod(u)
    builder = CertificateBuilder(P, W)
    builder.import_cert(link.cert0)
    builder.import_cert(link.cert1)
    if side == "left":
        if P.dom(f) != B or P.dom(g) != A or P.cod(f) != P.cod(g):
            raise PreconditionError("left cancellation needs f: B -> C and g: A -> C")
        require_verified(P, premise, (P.switchback(P.compose(Path(A, (u, f)))), P.switchback(g)), what="premise")
        builder.import_cert(premise)
        vuf = Path(B, (v, u, f))
        steps = [
            builder.theta(ThetaKey(Path(B, (f,)), 0, 0)),
            builder.cong([builder.sym(link.cert1.pair), builder.refl(P.switchback(f))]),
            builder.sym(builder.theta(ThetaKey(vuf, 0, 2))),
            builder.theta(ThetaKey(vuf, 1, 3)),
            builder.cong([builder.refl(P.switchback(v)), premise.pair]),
        ]
        target = (P.switchback(f), P.switchback(P.compose(Path(B, (v, g)))))
    elif side == "right":
        if P.cod(f) != A or P.cod(g) != B or P.dom(f) != P.dom(g):
            raise PreconditionError("right cancellation needs f: C -> A and g: C -> B")
        C = P.dom(f)
        require_verified(P, premise, (P.switchback(P.compose(Path(C, (f, u)))), P.switchback(g)), what="premise")
        builder.import_cert(premise)
        fuv = Path(C, (f, u, v))
        steps = [
            builder.theta(ThetaKey(Path(C, (f,)), 1, 1)),
            builder.cong([builder.refl(P.switchback(f)), builder.sym(link.cert0.pair)]),
            builder.sym(builder.theta(ThetaKey(fuv, 1, 3))),
            builder.theta(ThetaKey(fuv, 0, 2)),
            builder.cong([premise.pair, builder.refl(P.switchback(v))]),
        ]
        target = (P.switchback(f), P.switchback(P.compose(Path(C, (g, v)))))
    else:
        raise PreconditionError(f"side must be left or right, not {side!r}")
    got = builder.chain(steps)
    _check(builder, target, got)
    return builder.certificate(target)
