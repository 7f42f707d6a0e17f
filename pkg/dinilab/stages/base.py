"""Base classes and protocols for pipeline stages."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import ClassVar, Protocol, runtime_checkable

from dinilab.context import RunContext
from dinilab.grid import Domain


@runtime_checkable
class Stage(Protocol):
    """Protocol defining the interface for pipeline stages."""

    name: ClassVar[str]

    def applies(self, ctx: RunContext) -> bool:
        """Check if this stage takes part in the configured run."""
        ...

    def run(self, ctx: RunContext) -> None:
        """Execute the stage."""
        ...


class BaseStage(ABC, Stage):
    """Abstract base class for stages bound to one command."""

    name: ClassVar[str] = ""
    command: ClassVar[str | None] = None

    def applies(self, ctx: RunContext) -> bool:
        return self.command is None or ctx.config.command == self.command

    @abstractmethod
    def run(self, ctx: RunContext) -> None:
        """Execute the stage."""
        ...

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(name={self.name!r})>"


def make_domain(shape: str, n: int) -> Domain:
    """Unit square, or the unit disk, with ``n`` nodes per side."""
    return Domain.disk(n) if shape == "disk" else Domain.unit_square(n)
