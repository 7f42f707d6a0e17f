"""RunContext - Shared state for the experiment pipeline."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from dinilab.checks import EstimateCheck, write_checks_csv
from dinilab.config import RunConfig
from dinilab.fieldio import write_field, write_vector_field
from dinilab.grid import SampledField, VectorField
from dinilab.ui import Console


@dataclass
class RunContext:
    """Context object that flows through all pipeline stages."""

    config: RunConfig
    run_dir: Path
    checks: list[EstimateCheck] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)
    completed_stages: list[str] = field(default_factory=list)
    ui: Console | None = None

    def mark_completed(self, stage_name: str) -> None:
        """Mark a stage as completed."""
        if stage_name not in self.completed_stages:
            self.completed_stages.append(stage_name)

    def add_checks(self, checks: Sequence[EstimateCheck]) -> None:
        self.checks.extend(checks)

    def emit(self, path: Path) -> Path:
        """Record a file written into the run directory."""
        if path not in self.outputs:
            self.outputs.append(path)
        return path

    def write_json(self, name: str, data: Any) -> Path:
        path = self.run_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return self.emit(path)

    def write_field(self, name: str, f: SampledField) -> Path:
        return self.emit(write_field(f, self.run_dir / name))

    def write_vector_field(self, stem: str, v: VectorField) -> list[Path]:
        return [self.emit(p) for p in write_vector_field(v, self.run_dir, stem)]

    def write_checks(self, name: str = "checks.csv") -> Path:
        return self.emit(write_checks_csv(self.checks, self.run_dir / name))
