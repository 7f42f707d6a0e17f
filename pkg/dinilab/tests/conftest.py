"""Pytest configuration for dinilab tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def output_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the default output directory at a temporary path."""
    out = tmp_path / "runs"
    monkeypatch.setenv("DINILAB_OUTPUT_DIR", str(out))
    return out
