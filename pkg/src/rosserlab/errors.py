"""Exception hierarchy shared across the package."""

from __future__ import annotations


class RosserlabError(Exception):
    """Base class for all package errors."""


class ScenarioError(RosserlabError):
    """A scenario file or construction precondition is invalid."""


class DomainCapError(RosserlabError):
    """A finite domain (F_n, the code table, or a code's size) exceeds its cap."""


class CodeOverflowError(DomainCapError):
    """A Goedel code is too large to materialize exactly."""
