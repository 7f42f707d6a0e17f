"""Stage registry for the experiment pipeline."""

from __future__ import annotations

from .base import Stage

STAGE_REGISTRY: dict[str, type[Stage]] = {}


def register_stage(stage_class: type[Stage]) -> type[Stage]:
    """Decorator to register a stage class in the registry."""
    STAGE_REGISTRY[stage_class.name] = stage_class
    return stage_class


def get_stage(name: str) -> type[Stage] | None:
    """Get a stage class by name from the registry."""
    return STAGE_REGISTRY.get(name)


def get_all_stages() -> list[type[Stage]]:
    """Get all registered stage classes in registration order."""
    return list(STAGE_REGISTRY.values())
