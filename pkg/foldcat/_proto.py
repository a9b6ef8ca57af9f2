#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Plain value types shared by the foldcat modules
"""
from __future__ import annotations

__all__ = [
    "Path", "Status", "Finding", "Report", "ThetaKey", "CertNode", "RationalCert",
    "WeakStructure", "Budgets", "EquivMode", "Verdict", "Discreteness", "Shape",
    "ShapeClassification", "BruteForceOutcome", "BruteForceResult", "CellLevelMap",
    "FunctorData"
]

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, List, Optional, Tuple

from foldcat._utils import budget_states, canonical_json, to_jsonable, tuple_token
from foldcat._version import __version__
from foldcat.errors import DanglingReferenceError, DuplicateIdError, MissingEntryError

Ident = Hashable


@dataclass(frozen=True)
class Path:
    base: Ident
    arrows: Tuple[Ident, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def prefix(self, n: int) -> Path:
        return Path(self.base, self.arrows[:n])

    def to_dict(self) -> dict:
        return {"base": tuple_token(self.base), "arrows": [tuple_token(a) for a in self.arrows]}

    def __str__(self):
        return "<" + ",".join(tuple_token(x) for x in (self.base,) + self.arrows) + ">"


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED_FRONTIER = "skipped-frontier"
    SKIPPED_MISSING_THETA = "skipped-missing-theta"


@dataclass(frozen=True)
class Finding:
    check_id: str
    status: Status
    witness: Dict[str, Any] = field(default_factory=dict)

    def sort_key(self):
        return (self.check_id, canonical_json(self.witness), self.status.value)

    def to_dict(self) -> dict:
        return {"check_id": self.check_id, "status": self.status.value, "witness": self.witness}


@dataclass
class Report:
    findings: List[Finding] = field(default_factory=list)
    budgets: Dict[str, int] = field(default_factory=dict)
    input_digest: Optional[str] = None
    version: str = __version__

    def add(self, check_id: str, status: Status, **witness) -> Finding:
        finding = Finding(check_id, Status(status), to_jsonable(witness))
        self.findings.append(finding)
        return finding

    def extend(self, other: Report):
        self.findings.extend(other.findings)
        self.budgets.update(other.budgets)

    @property
    def ok(self) -> bool:
        """ True when no finding failed; skipped findings do not count against the report """
        return not any(f.status == Status.FAIL for f in self.findings)

    def select(self, check_id: Optional[str] = None, status: Optional[Status] = None) -> List[Finding]:
        return [f for f in self.sorted_findings()
                if (check_id is None or f.check_id == check_id)
                and (status is None or f.status == status)]

    def failures(self, check_id: Optional[str] = None) -> List[Finding]:
        return self.select(check_id, Status.FAIL)

    def sorted_findings(self) -> List[Finding]:
        return sorted(self.findings, key=Finding.sort_key)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {s.value: 0 for s in Status}
        for f in self.findings:
            counts[f.status.value] += 1
        return counts

    def body(self) -> dict:
        """ report content without tool version and input digest """
        return {
            "tool": "foldcat",
            "budgets": dict(self.budgets),
            "findings": [f.to_dict() for f in self.sorted_findings()],
            "summary": self.summary,
        }

    def to_dict(self) -> dict:
        doc = self.body()
        doc["version"] = self.version
        doc["input_digest"] = self.input_digest
        return doc

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_text(self) -> str:
        lines = []
        for f in self.sorted_findings():
            lines.append("{:<22} {}  {}".format(
                f.status.value.upper(), f.check_id,
                json.dumps(f.witness, sort_keys=True, separators=(",", ":"), ensure_ascii=False)))
        summary = ", ".join(f"{k}={v}" for k, v in sorted(self.summary.items()))
        lines.append("summary: " + summary)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ThetaKey:
    """ contraction of the block f_{a+1..b} of path; a == b inserts the identity at A_a """
    path: Path
    a: int
    b: int

    def to_dict(self) -> dict:
        doc = self.path.to_dict()
        doc.update(a=self.a, b=self.b)
        return doc

    def __str__(self):
        return f"theta{self.path}[{self.a},{self.b}]"


@dataclass(frozen=True)
class CertNode:
    id: Ident
    left: Ident
    right: Ident
    fwd: Optional[Ident] = None
    bwd: Optional[Ident] = None
    child0: Optional[Ident] = None
    child1: Optional[Ident] = None

    @property
    def pair(self) -> Tuple[Ident, Ident]:
        return (self.left, self.right)

    @property
    def is_stub(self) -> bool:
        """ frontier stubs carry a pair but no arrows and no children """
        return self.fwd is None and self.bwd is None and self.child0 is None and self.child1 is None

    def to_dict(self) -> dict:
        return {k: None if v is None else tuple_token(v) for k, v in (
            ("id", self.id), ("left", self.left), ("right", self.right), ("fwd", self.fwd),
            ("bwd", self.bwd), ("child0", self.child0), ("child1", self.child1))}


@dataclass(frozen=True)
class RationalCert:
    root: Ident
    nodes: Tuple[CertNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {n.id: n for n in self.nodes})

    def node(self, node_id) -> CertNode:
        return self._index[node_id]

    def has_node(self, node_id) -> bool:
        return node_id in self._index

    @property
    def pair(self) -> Tuple[Ident, Ident]:
        return self.node(self.root).pair

    @property
    def root_node(self) -> CertNode:
        return self.node(self.root)

    @property
    def stubs(self) -> List[CertNode]:
        return [n for n in self.nodes if n.is_stub]

    def __len__(self):
        return len(self.nodes)

    def to_dict(self) -> dict:
        nodes = sorted(self.nodes, key=lambda n: _node_order(n.id))
        return {"root": tuple_token(self.root), "nodes": [n.to_dict() for n in nodes]}

    @classmethod
    def from_dict(cls, doc: dict, source: Optional[str] = None) -> RationalCert:
        """
        Raises:
            DuplicateIdError, DanglingReferenceError
        """
        nodes = []
        seen = set()
        for i, raw in enumerate(doc["nodes"]):
            if raw["id"] in seen:
                raise DuplicateIdError(f"duplicate certificate node {raw['id']}", source, f"/nodes/{i}/id")
            seen.add(raw["id"])
            nodes.append(CertNode(raw["id"], raw["left"], raw["right"], raw.get("fwd"), raw.get("bwd"),
                                  raw.get("child0"), raw.get("child1")))
        for i, node in enumerate(nodes):
            for name in ("child0", "child1"):
                child = getattr(node, name)
                if child is not None and child not in seen:
                    raise DanglingReferenceError(f"unknown node {child}", source, f"/nodes/{i}/{name}")
        if doc["root"] not in seen:
            raise DanglingReferenceError(f"unknown root node {doc['root']}", source, "/root")
        return cls(doc["root"], tuple(nodes))


def _node_order(node_id):
    text = tuple_token(node_id)
    if text[:1] == "n" and text[1:].isdigit():
        return (0, int(text[1:]), text)
    return (1, 0, text)


@dataclass(frozen=True)
class WeakStructure:
    hcomp: Dict[Tuple[str, str], str] = field(default_factory=dict)
    hunit: Dict[str, str] = field(default_factory=dict)
    theta: Dict[ThetaKey, RationalCert] = field(default_factory=dict)
    theta_fallback: Optional[str] = None
    theta_withheld: FrozenSet[ThetaKey] = frozenset()


@dataclass
class Budgets:
    max_path_len: int = 4
    max_arity: int = 3
    max_states: int = field(default_factory=budget_states)
    max_level: int = 8

    def to_dict(self) -> dict:
        return {"max_path_len": self.max_path_len, "max_arity": self.max_arity,
                "max_states": self.max_states, "max_level": self.max_level}


class EquivMode(str, enum.Enum):
    EXACT = "exact"
    OPTIMISTIC = "optimistic"


class Verdict(str, enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    FRONTIER = "frontier"


class Discreteness(str, enum.Enum):
    YES = "yes"
    NO = "no"
    FRONTIER = "frontier"


class Shape(str, enum.Enum):
    CATEGORY = "category"
    BICATEGORY_LIKE = "bicategory-like"
    GENERAL = "general"


@dataclass(frozen=True)
class ShapeClassification:
    shape: Shape
    frontier_limited: bool = False


class BruteForceOutcome(str, enum.Enum):
    YES = "yes-with-cert"
    NO_WITHIN_BOUND = "no-within-bound"
    FRONTIER = "frontier"


@dataclass(frozen=True)
class BruteForceResult:
    outcome: BruteForceOutcome
    cert: Optional[RationalCert] = None
    states: int = 0

    @property
    def frontier_limited(self) -> bool:
        return self.cert is not None and bool(self.cert.stubs)


@dataclass(frozen=True)
class CellLevelMap:
    levels: Dict[Ident, int]
    lower_bound_only: FrozenSet[Ident]
    max_level: int

    def __getitem__(self, obj) -> int:
        return self.levels[obj]

    def is_exact(self, obj) -> bool:
        return obj not in self.lower_bound_only


@dataclass
class FunctorData:
    source: Any
    target: Any
    object_map: Dict[Ident, Ident]
    arrow_map: Dict[Ident, Ident]

    def obj(self, x):
        try:
            return self.object_map[x]
        except KeyError:
            raise MissingEntryError(f"functor has no image for object {tuple_token(x)}", x) from None

    def arr(self, f):
        try:
            return self.arrow_map[f]
        except KeyError:
            raise MissingEntryError(f"functor has no image for arrow {tuple_token(f)}", f) from None
