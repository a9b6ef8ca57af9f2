#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Small helpers: identifier tokens, canonical JSON, digests, budgets and atomic writes
"""

import enum
import hashlib
import json
import os
import pathlib
import tempfile
import typing

from foldcat.errors import BudgetExceededError

DEFAULT_BUDGET_STATES = 100000


def budget_states() -> int:
    """ state budget, overridable by the FCAT_BUDGET_STATES environment variable """
    value = os.environ.get("FCAT_BUDGET_STATES")
    if not value:
        return DEFAULT_BUDGET_STATES
    return int(value)


class StateBudget:
    """ counts explored states and raises once the limit is passed """

    def __init__(self, what: str, limit: typing.Optional[int] = None):
        self.what = what
        self.limit = limit if limit is not None else budget_states()
        self.used = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceededError(self.what, self.limit)


def tuple_token(value) -> str:
    """
    Render an identifier as text. Tuple identifiers (used by power structures)
    become "(f,g,...)" tokens, nested tuples nest.
    """
    if isinstance(value, tuple):
        return "(" + ",".join(tuple_token(v) for v in value) + ")"
    return str(value)


def parse_tuple_token(token: str):
    """ inverse of tuple_token; plain tokens are returned unchanged """
    if not token.startswith("("):
        return token

    def parse(pos: int):
        if token[pos] != "(":
            end = pos
            while end < len(token) and token[end] not in ",)":
                end += 1
            return token[pos:end], end
        items = []
        pos += 1
        if token[pos] == ")":
            return tuple(items), pos + 1
        while True:
            item, pos = parse(pos)
            items.append(item)
            if token[pos] == ")":
                return tuple(items), pos + 1
            pos += 1  # skip ","

    value, end = parse(0)
    if end != len(token):
        raise ValueError("trailing characters in tuple token: " + token)
    return value


def sort_key(value) -> str:
    """ lexicographic ordering key for identifiers of any shape """
    return tuple_token(value)


def sorted_ids(values: typing.Iterable) -> list:
    return sorted(values, key=sort_key)


def to_jsonable(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, tuple):
        return tuple_token(value)
    if isinstance(value, (list, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return items if isinstance(value, list) else sorted(items, key=str)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


def canonical_json(document) -> str:
    """ sorted keys, two-space indent, trailing newline """
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def atomic_write(path: typing.Union[str, pathlib.Path], text: str):
    """ write text to path through a temporary file so that no partial file is left behind """
    path = pathlib.Path(path)
    fd, tmp = tempfile.mkstemp(prefix="." + path.name + ".", dir=str(path.parent or "."))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
