"""Custom exception hierarchy for dinilab."""

from __future__ import annotations

from typing import Any


class LabError(Exception):
    """Base exception for all dinilab errors."""

    pass


class InvalidArgumentError(LabError):
    """An operation received arguments outside its domain."""

    pass


class SingularityError(InvalidArgumentError):
    """Evaluation requested at a kernel singularity."""

    pass


class UnsupportedDomainError(LabError):
    """Solver does not support the requested domain shape."""

    pass


class ConfigError(LabError):
    """Configuration error."""

    pass


class CorruptFileError(LabError):
    """Field file is malformed or truncated."""

    pass


class DomainEscapeError(LabError):
    """A mapped point left the domain by more than half a grid spacing."""

    def __init__(self, points: list[tuple[float, float]]) -> None:
        self.points = points
        preview = ", ".join(f"({x:.4g}, {y:.4g})" for x, y in points[:5])
        more = f" (+{len(points) - 5} more)" if len(points) > 5 else ""
        super().__init__(f"{len(points)} mapped point(s) outside the domain: {preview}{more}")


class SolverFailureError(LabError):
    """Iterative solver did not reach its tolerance."""

    def __init__(self, solver: str, residuals: list[float], message: str = "") -> None:
        self.solver = solver
        self.residuals = residuals
        last = f"{residuals[-1]:.3e}" if residuals else "n/a"
        detail = f": {message}" if message else ""
        super().__init__(f"{solver} failed after {len(residuals)} iterations (last residual {last}){detail}")


class InvariantViolationError(LabError):
    """A quantity exceeded the bound it is required to respect."""

    def __init__(self, name: str, value: float, bound: float) -> None:
        self.name = name
        self.value = value
        self.bound = bound
        super().__init__(f"{name} = {value:.6g} exceeds bound {bound:.6g}")


class StageFailedError(LabError):
    """A pipeline stage raised; wraps the cause with the stage name."""

    def __init__(self, stage_name: str, cause: Any = None) -> None:
        self.stage_name = stage_name
        self.cause = cause
        super().__init__(f"Stage {stage_name} failed: {cause}")

    def __str__(self) -> str:
        return f"Stage {self.stage_name} failed: {self.cause}"
