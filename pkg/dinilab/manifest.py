"""Run manifest: file inventory, check summary and reproducibility hashes."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from dinilab import __build__, __version__
from dinilab.checks import EstimateCheck
from dinilab.errors import CorruptFileError

MANIFEST_FILE = "manifest.json"
RECORD_FILES = frozenset({"config.json"})


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class FileEntry:
    """One emitted file, relative to the run directory."""

    path: str
    sha256: str
    size: int


@dataclass
class CheckSummary:
    total: int = 0
    passed: int = 0
    gating: int = 0
    gating_failed: list[str] = field(default_factory=list)
    informational_failed: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.gating_failed

    @classmethod
    def from_checks(cls, checks: Sequence[EstimateCheck]) -> CheckSummary:
        summary = cls(total=len(checks), passed=sum(c.passed for c in checks), gating=sum(c.gating for c in checks))
        for check in checks:
            if check.passed:
                continue
            label = check.name if check.grid is None else f"{check.name}@{check.grid}"
            target = summary.gating_failed if check.gating else summary.informational_failed
            if label not in target:
                target.append(label)
        return summary


@dataclass
class RunManifest:
    """Everything needed to tell whether two runs agree.

    ``numerical_hash`` covers the inventory (paths and file hashes) minus the resolved config,
    which records the output directory; wall-clock time is recorded for information and stays out
    of it.
    """

    command: str
    config_hash: str
    threads: int
    version: str = __version__
    build: str = __build__
    wall_clock: float = 0.0
    checks: CheckSummary = field(default_factory=CheckSummary)
    files: list[FileEntry] = field(default_factory=list)
    numerical_hash: str = ""

    @property
    def passed(self) -> bool:
        return self.checks.ok

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunManifest:
        values = {k: v for k, v in data.items() if k != "passed"}
        values["checks"] = CheckSummary(**values.get("checks", {}))
        values["files"] = [FileEntry(**entry) for entry in values.get("files", [])]
        return cls(**values)

    def write(self, directory: Path) -> Path:
        path = directory / MANIFEST_FILE
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return path


def inventory(directory: Path, paths: Sequence[Path]) -> list[FileEntry]:
    """Hash every emitted file, sorted by relative path."""
    entries = []
    for path in sorted(set(paths)):
        rel = path.relative_to(directory).as_posix()
        entries.append(FileEntry(path=rel, sha256=file_sha256(path), size=path.stat().st_size))
    return sorted(entries, key=lambda e: e.path)


def numerical_hash(entries: Sequence[FileEntry]) -> str:
    digest = hashlib.sha256()
    for entry in sorted(entries, key=lambda e: e.path):
        if entry.path in RECORD_FILES:
            continue
        digest.update(f"{entry.path}\0{entry.sha256}\n".encode())
    return digest.hexdigest()


def build_manifest(
    command: str,
    config_hash: str,
    threads: int,
    directory: Path,
    paths: Sequence[Path],
    checks: Sequence[EstimateCheck],
    wall_clock: float,
) -> RunManifest:
    entries = inventory(directory, paths)
    return RunManifest(
        command=command,
        config_hash=config_hash,
        threads=threads,
        wall_clock=wall_clock,
        checks=CheckSummary.from_checks(checks),
        files=entries,
        numerical_hash=numerical_hash(entries),
    )


def load_manifest(directory: Path) -> RunManifest:
    path = directory / MANIFEST_FILE
    try:
        return RunManifest.from_dict(json.loads(path.read_text()))
    except (OSError, json.JSONDecodeError, TypeError) as e:
        raise CorruptFileError(f"Cannot read manifest {path}: {e}") from e


def verify_manifest(directory: Path, manifest: RunManifest) -> list[str]:
    """Listed files that are missing or whose contents changed."""
    problems = []
    for entry in manifest.files:
        path = directory / entry.path
        if not path.exists():
            problems.append(f"missing: {entry.path}")
        elif file_sha256(path) != entry.sha256:
            problems.append(f"changed: {entry.path}")
    return problems
