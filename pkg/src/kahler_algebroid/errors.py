"""Exception hierarchy."""

from __future__ import annotations


class DimensionError(ValueError):
    """Shapes or ambient dimensions do not match."""


class ContractError(ValueError):
    """An operator does not respect the subcomplexes it is asked to act on."""


class ModelError(ValueError):
    """The algebroid presentation violates an axiom or lacks required structure."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class IncompleteModelError(ModelError):
    """A check needs data (metric, J, omega, eta) that the presentation does not carry."""


class NondegeneracyError(ModelError):
    """A 2-form that must be nondegenerate is degenerate."""


class IntegrabilityError(ModelError):
    """The differential has components of bidegree (2,-1) or (-1,2)."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree (an internal bug)."""


class ParseError(ValueError):
    """Malformed model file; ``location`` is a line/column or a JSON path."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
