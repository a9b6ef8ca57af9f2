#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Exception hierarchy shared by every foldcat module
"""

__all__ = [
    "FoldError", "PresentationError", "DuplicateIdError", "DanglingReferenceError",
    "IllTypedPathError", "FrontierIncompleteError", "MissingEntryError", "MissingThetaError",
    "BudgetExceededError", "NonGlobularError", "CategoryLawError", "ShapeError",
    "CertificateError", "PreconditionError", "MutationError"
]

from typing import Any, Optional


class FoldError(Exception):
    """ foldcat error """


class PresentationError(FoldError):
    def __init__(self, message: str, source: Optional[str] = None, position: Optional[str] = None):
        """
        Syntax or schema problem in an input document.

        position is a JSON pointer like "/arrows/3/dom", or "line:col" for JSON syntax errors.
        """
        super().__init__(message)
        self.message = message
        self.source = source
        self.position = position

    def __str__(self):
        where = ":".join(p for p in (self.source, self.position) if p)
        return f"{where}: {self.message}" if where else self.message


class DuplicateIdError(PresentationError):
    """ identifier declared twice """


class DanglingReferenceError(PresentationError):
    """ reference to an undeclared identifier """


class IllTypedPathError(FoldError):
    """ arrows of a path are not head-to-tail """


class FrontierIncompleteError(FoldError):
    """ required data was cut away by truncation """


class MissingEntryError(FoldError):
    def __init__(self, message: str, entry: Any = None):
        super().__init__(message)
        self.entry = entry


class MissingThetaError(FoldError):
    def __init__(self, key):
        super().__init__(f"no coherence certificate for {key}")
        self.key = key


class BudgetExceededError(FoldError):
    def __init__(self, what: str, limit: int):
        super().__init__(f"{what}: state budget {limit} exhausted")
        self.what = what
        self.limit = limit


class NonGlobularError(FoldError):
    """ presentation has cells between non-parallel arrows """


class CategoryLawError(FoldError):
    """ category or 2-category input violates a strict law """


class ShapeError(FoldError):
    """ presentation does not have the required shape """


class CertificateError(FoldError):
    """ certificate could not be built or does not verify """


class PreconditionError(FoldError):
    """ operation called outside its precondition """


class MutationError(FoldError):
    """ mutation refers to entries that do not exist """
