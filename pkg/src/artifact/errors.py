"""Exception types and the shared search budget."""

from __future__ import annotations

import time
from typing import Optional


class ArtifactError(Exception):
    """Base class for all errors raised by this package."""


class NotAGroup(ArtifactError):
    pass


class UnknownFamily(ArtifactError):
    pass


class OrderTooLarge(ArtifactError):
    pass


class NoTripleFound(ArtifactError):
    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class IdOutOfRange(ArtifactError):
    pass


class UnbalancedParts(ArtifactError):
    pass


class TooLarge(ArtifactError):
    pass


class NotFound(ArtifactError):
    pass


class NotAbelian(ArtifactError):
    pass


class InvalidSpec(ArtifactError):
    pass


class PreconditionFailed(ArtifactError):
    def __init__(self, message: str, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class NoProjection(ArtifactError):
    pass


class GadgetCollision(ArtifactError):
    pass


class RoutingInvariantViolation(ArtifactError):
    pass


class InvalidP(ArtifactError):
    pass


class BudgetExceeded(ArtifactError):
    def __init__(self, nodes: int, reason: str = "node budget"):
        super().__init__(f"search budget exceeded after {nodes} nodes ({reason})")
        self.nodes = nodes
        self.reason = reason


DEFAULT_BUDGET = 10_000_000


class Budget:
    """Counts search nodes and trips once a node or wall-clock limit is hit.

    ``limit=None`` means unlimited nodes.  The clock is only consulted every
    4096 ticks so the check stays cheap inside tight loops.
    """

    __slots__ = ("limit", "nodes", "deadline")

    def __init__(self, limit: Optional[int] = DEFAULT_BUDGET,
                 time_limit: Optional[float] = None):
        self.limit = limit
        self.nodes = 0
        self.deadline = None if time_limit is None else time.monotonic() + time_limit

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded(self.nodes)
        if self.deadline is not None and (self.nodes & 4095) == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded(self.nodes, "time limit")


def as_budget(budget) -> Budget:
    """Accept an int, None, or an existing Budget."""
    if isinstance(budget, Budget):
        return budget
    return Budget(DEFAULT_BUDGET if budget is None else budget)
