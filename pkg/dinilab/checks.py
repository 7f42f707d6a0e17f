"""Verified-inequality records, refinement summaries and their CSV form."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

CSV_COLUMNS = ("name", "grid", "time", "lhs", "rhs", "constant", "margin", "passed", "gating", "note")


@dataclass(frozen=True)
class EstimateCheck:
    """One verified inequality ``lhs <= rhs`` (or ``lhs / rhs <= ceiling``)."""

    name: str
    lhs: float
    rhs: float
    constant: float
    passed: bool
    grid: int | None = None
    time: float | None = None
    ceiling: float | None = None
    gating: bool = False
    note: str = ""

    @property
    def margin(self) -> float:
        """How far the check is from failing; negative when it fails."""
        if self.ceiling is not None:
            return self.ceiling - self.constant if math.isfinite(self.constant) else -self.lhs
        return self.rhs - self.lhs

    @classmethod
    def inequality(
        cls,
        name: str,
        lhs: float,
        rhs: float,
        tol: float = 0.0,
        **extra: object,
    ) -> EstimateCheck:
        """Check ``lhs <= rhs + tol``; the constant is the ratio lhs/rhs when rhs > 0."""
        constant = lhs / rhs if rhs > 0 else math.nan
        return cls(name=name, lhs=float(lhs), rhs=float(rhs), constant=constant, passed=bool(lhs <= rhs + tol), **extra)  # type: ignore[arg-type]

    @classmethod
    def ratio(cls, name: str, lhs: float, rhs: float, ceiling: float, **extra: object) -> EstimateCheck:
        """Empirical-constant check ``lhs / rhs <= ceiling``; zero data passes as 0 <= 0."""
        if rhs > 0:
            constant = lhs / rhs
            passed = constant <= ceiling
        else:
            constant = math.nan
            passed = lhs <= 0.0
        return cls(
            name=name,
            lhs=float(lhs),
            rhs=float(rhs),
            constant=constant,
            passed=bool(passed),
            ceiling=ceiling,
            **extra,  # type: ignore[arg-type]
        )

    def as_row(self) -> dict[str, object]:
        row = asdict(self)
        row["margin"] = self.margin
        return {key: row[key] for key in CSV_COLUMNS}


@dataclass(frozen=True)
class RefinementSummary:
    """How a quantity behaves along a grid-refinement series."""

    name: str
    grids: tuple[int, ...]
    values: tuple[float, ...]
    variation: float
    slope: float
    r_squared: float
    monotone: bool
    expectation: str
    passed: bool


def summarize_refinement(
    name: str,
    grids: Sequence[int],
    spacings: Sequence[float],
    values: Sequence[float],
    expectation: str = "stable",
    max_variation: float = 0.1,
    min_r_squared: float = 0.9,
) -> RefinementSummary:
    """Summarize a refinement series.

    ``expectation="stable"`` passes when the relative spread stays below ``max_variation``;
    ``expectation="divergent"`` passes when the series grows monotonically with a positive slope
    against log(1/h) and a linear fit with R^2 above ``min_r_squared``.
    """
    vals = np.asarray(values, dtype=np.float64)
    scale = float(np.abs(vals).max()) if len(vals) else 0.0
    variation = float((vals.max() - vals.min()) / scale) if scale > 0 else 0.0
    monotone = bool(np.all(np.diff(vals) > 0))
    if len(vals) >= 3:
        fit = stats.linregress(np.log(1.0 / np.asarray(spacings)), vals)
        slope, r_squared = float(fit.slope), float(fit.rvalue**2)
    else:
        slope, r_squared = math.nan, math.nan
    if expectation == "divergent":
        passed = monotone and slope > 0 and r_squared > min_r_squared
    else:
        passed = variation < max_variation
    return RefinementSummary(
        name=name,
        grids=tuple(int(g) for g in grids),
        values=tuple(float(v) for v in vals),
        variation=variation,
        slope=slope,
        r_squared=r_squared,
        monotone=monotone,
        expectation=expectation,
        passed=bool(passed),
    )


def observed_order(errors: Sequence[float], spacings: Sequence[float]) -> float:
    """Convergence order from the last two runs of a refinement series."""
    e0, e1 = errors[-2], errors[-1]
    h0, h1 = spacings[-2], spacings[-1]
    if e1 <= 0 or e0 <= 0:
        return math.inf
    return math.log(e0 / e1) / math.log(h0 / h1)


def write_checks_csv(checks: Sequence[EstimateCheck], path: Path) -> Path:
    """Write checks as CSV, one row per check."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for check in checks:
            writer.writerow(check.as_row())
    return path


def all_gating_passed(checks: Sequence[EstimateCheck]) -> bool:
    return all(check.passed for check in checks if check.gating)
