"""Exception hierarchy shared across the package."""

from __future__ import annotations


class TreeGrowerError(Exception):
    """Base class for every error raised by treegrower."""


class TreeError(TreeGrowerError, ValueError):
    """Input does not describe a valid tree."""


class EmptyInput(TreeError):
    pass


class SelfLoop(TreeError):
    pass


class DuplicateEdge(TreeError):
    pass


class CycleDetected(TreeError):
    pass


class DisconnectedInput(TreeError):
    pass


class InvalidVertexId(TreeError):
    pass


class ParseError(TreeError):
    """A tree or seed description could not be parsed."""


class CapacityExceeded(TreeGrowerError):
    """Growing would exceed the configured vertex budget."""


class TooLarge(TreeGrowerError):
    """An O(n^2) oracle was asked to run on a tree above its size guard."""


class InsufficientPoints(TreeGrowerError, ValueError):
    pass


class NonPositiveValue(TreeGrowerError, ValueError):
    pass


class StepCapExceeded(TreeGrowerError):
    """A simulated walk hit the step cap before reaching its target."""

    def __init__(self, cap: int):
        super().__init__(f"walk exceeded step cap of {cap}")
        self.cap = cap
