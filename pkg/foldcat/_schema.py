#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""JSON Schemas of the input documents and the loader that checks them
"""

import json
import logging

from jsonschema import Draft202012Validator

from foldcat.errors import PresentationError

logger = logging.getLogger(__name__)

_ID = {"type": "string", "minLength": 1}
_OPT_ID = {"type": ["string", "null"], "minLength": 1}
_IDS = {"type": "array", "items": _ID}
_ID_MAP = {"type": "object", "additionalProperties": _ID}


def _record(**props) -> dict:
    return {"type": "object", "additionalProperties": False,
            "required": sorted(props), "properties": props}


_TRIPLES = {"type": "array", "items": _record(left=_ID, right=_ID, out=_ID)}
_TYPED = {"type": "array", "items": _record(id=_ID, dom=_ID, cod=_ID)}
_INDEX = {"type": "integer", "minimum": 0}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["root", "nodes"],
    "properties": {
        "root": _ID,
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "left", "right"],
                "properties": {
                    "id": _ID, "left": _ID, "right": _ID,
                    "fwd": _OPT_ID, "bwd": _OPT_ID, "child0": _OPT_ID, "child1": _OPT_ID,
                },
            },
        },
    },
}

_THETA_KEY = _record(base=_ID, arrows=_IDS, a=_INDEX, b=_INDEX)
_THETA_ENTRY = _record(base=_ID, arrows=_IDS, a=_INDEX, b=_INDEX, cert=CERTIFICATE_SCHEMA)

WEAK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "hcomp": _TRIPLES,
        "hunit": _ID_MAP,
        "theta": {"type": "array", "items": _THETA_ENTRY},
        "theta_fallback": {"enum": ["reflexive", None]},
        "theta_withheld": {"type": "array", "items": _THETA_KEY},
    },
}

PRESENTATION_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["objects", "arrows", "identity", "J"],
    "properties": {
        "objects": _IDS,
        "arrows": _TYPED,
        "identity": _ID_MAP,
        "bcomp": _TRIPLES,
        "overrides": {"type": "array", "items": _record(base=_ID, arrows=_IDS, out=_ID)},
        "J": _ID_MAP,
        "frontier": _IDS,
        "weak": WEAK_SCHEMA,
    },
}

CATEGORY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["objects", "morphisms", "identity", "composition"],
    "properties": {
        "objects": _IDS,
        "morphisms": _TYPED,
        "identity": _ID_MAP,
        "composition": _TRIPLES,
    },
}

TWO_CATEGORY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["objects", "one_cells", "one_identity", "one_composition",
                 "two_cells", "two_identity", "vertical", "horizontal"],
    "properties": {
        "objects": _IDS,
        "one_cells": _TYPED,
        "one_identity": _ID_MAP,
        "one_composition": _TRIPLES,
        "two_cells": {"type": "array", "items": _record(id=_ID, source=_ID, target=_ID)},
        "two_identity": _ID_MAP,
        "vertical": _TRIPLES,
        "horizontal": _TRIPLES,
    },
}

GRAPH_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": _IDS,
        "edges": {"type": "array", "items": _record(id=_ID, src=_ID, dst=_ID)},
    },
}


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def check_document(document, schema: dict, source: str = None):
    """
    Raises:
        PresentationError: first schema violation, ordered by JSON path
    """
    validator = Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        err = errors[0]
        logger.debug("%d schema errors in %s", len(errors), source or "<input>")
        raise PresentationError(err.message, source, _pointer(err.absolute_path))


def load_document(text: str, schema: dict, source: str = None):
    """
    Parse JSON text and check it against schema

    Raises:
        PresentationError: JSON syntax error (line:col position) or schema violation
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise PresentationError(e.msg, source, f"{e.lineno}:{e.colno}") from e
    check_document(document, schema, source)
    return document
