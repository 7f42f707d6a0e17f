"""Regularity-ratio studies under grid refinement.

Each family pairs a solution norm with a data norm. The cutoffs of the data seminorm are fixed
across the series (r_lo from the coarsest grid) so that only the resolution changes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from dinilab.checks import EstimateCheck, RefinementSummary, summarize_refinement
from dinilab.elliptic.operators import (
    NEIGHBOR_OFFSETS,
    c2_norm,
    difference_quotient,
    gradient_sup,
    hessian_sup,
    offsets_up_to,
    velocity_gradients,
)
from dinilab.elliptic.poisson import poisson_solve, velocity_from_vorticity
from dinilab.elliptic.stokes import stokes_solve
from dinilab.errors import InvalidArgumentError
from dinilab.funcspace.seminorms import norm_cstar, norm_dstar, seminorm_holder
from dinilab.funcspace.witness import make_witness, witness_function
from dinilab.grid import Domain, FloatArray, SampledField, VectorField

logger = logging.getLogger(__name__)

DEFAULT_RHO = 0.25


@dataclass(frozen=True)
class StudyFamily:
    """One regularity estimate: default data and whether its series should settle or blow up."""

    name: str
    data: str
    params: Mapping[str, Any]
    expectation: str
    max_variation: float = 0.1


FAMILIES: dict[str, StudyFamily] = {
    family.name: family
    for family in (
        StudyFamily("poisson_cstar", "eigen_sine", {}, "stable"),
        StudyFamily("velocity_dstar", "gaussian", {"width": 0.1}, "stable"),
        StudyFamily("stokes_dstar", "bump_cascade", {"depth": 2}, "stable", max_variation=0.25),
        StudyFamily(
            "poisson_nondini",
            "log_reciprocal",
            {"power": 0.5, "quadrupole": True, "support": 0.35},
            "divergent",
        ),
        StudyFamily("velocity_holder", "holder", {"lam": 0.5, "amplitude": 1.0}, "stable", max_variation=0.25),
    )
}


@dataclass(frozen=True)
class StudyPoint:
    grid: int
    spacing: float
    lhs: float
    rhs: float


def _holder_norm(values: FloatArray, domain: Domain, lam: float, max_radius: float) -> float:
    offsets = offsets_up_to(domain, max_radius)
    return float(np.abs(values).max()) + difference_quotient(values, domain.dx, domain.dy, offsets, lam)


def c11_norm(v: VectorField) -> float:
    """‖u‖_{1,1}: sup of u and ∇u plus the neighbour Lipschitz constant of ∇u."""
    d = v.domain
    lip = max(difference_quotient(g, d.dx, d.dy, NEIGHBOR_OFFSETS) for g in velocity_gradients(v))
    return v.sup + gradient_sup(v) + lip


def c01_norm(p: SampledField) -> float:
    """‖p‖_{0,1}: sup plus the neighbour Lipschitz constant."""
    return p.sup + difference_quotient(p.values, p.domain.dx, p.domain.dy, NEIGHBOR_OFFSETS)


def edge_field(domain: Domain, values: FloatArray, axis: int) -> SampledField:
    """Wrap one staggered component as a field on its own lattice."""
    shift = (0.0, 0.5 * domain.dy) if axis == 0 else (0.5 * domain.dx, 0.0)
    lattice = Domain(
        x0=domain.x0 + shift[0],
        y0=domain.y0 + shift[1],
        dx=domain.dx,
        dy=domain.dy,
        nx=values.shape[0],
        ny=values.shape[1],
    )
    return SampledField(lattice, values)


def _measure(family: str, domain: Domain, data: str, params: Mapping[str, Any], rho: float, r_lo: float, workers: int) -> tuple[float, float]:
    cut = {"rho": rho, "r_lo": r_lo}
    if family == "stokes_dstar":
        g = witness_function(data, params, domain)
        f = VectorField.from_functions(domain, g, g)
        solution = stokes_solve(f, workers=workers)
        lhs = c11_norm(solution.velocity) + c01_norm(solution.pressure)
        rhs = max(norm_dstar(edge_field(domain, f.v1, 0), **cut), norm_dstar(edge_field(domain, f.v2, 1), **cut))
        return lhs, rhs
    theta = make_witness(data, params, domain)
    if family == "poisson_cstar":
        return c2_norm(poisson_solve(theta, workers=workers)), norm_cstar(theta, **cut)
    if family == "poisson_nondini":
        return hessian_sup(poisson_solve(theta, workers=workers)), theta.sup
    v = velocity_from_vorticity(theta, workers=workers)
    if family == "velocity_dstar":
        return gradient_sup(v), norm_dstar(theta, **cut)
    lam = float(params.get("lam", 0.5))
    lhs = max(_holder_norm(g, domain, lam, rho) for g in velocity_gradients(v))
    return lhs, theta.sup + seminorm_holder(theta, lam)


def study_points(
    family: str,
    grids: Sequence[int],
    data: str | None = None,
    params: Mapping[str, Any] | None = None,
    rho: float = DEFAULT_RHO,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> list[StudyPoint]:
    """Solution and data norms of one family on each grid of the series."""
    spec = _family(family)
    data = data or spec.data
    params = dict(spec.params if params is None else params)
    if len(grids) < 3:
        raise InvalidArgumentError(f"a refinement study needs at least 3 grids, got {list(grids)}")
    r_lo = 2.0 / (min(grids) - 1)
    points = []
    for n in sorted(grids):
        domain = Domain.unit_square(n)
        lhs, rhs = _measure(family, domain, data, params, rho, r_lo, workers)
        logger.info("%s grid %d: lhs=%.6g rhs=%.6g", family, n, lhs, rhs)
        points.append(StudyPoint(grid=n, spacing=domain.dx, lhs=lhs, rhs=rhs))
        if progress is not None:
            progress(n)
    return points


def _family(name: str) -> StudyFamily:
    if name not in FAMILIES:
        raise InvalidArgumentError(f"unknown regularity family {name!r}, expected one of {sorted(FAMILIES)}")
    return FAMILIES[name]


def summarize_points(family: str, points: Sequence[StudyPoint]) -> RefinementSummary:
    """Refinement summary of the ratios (stable families) or of the solution norm (divergent ones)."""
    spec = _family(family)
    if spec.expectation == "divergent":
        values = [p.lhs for p in points]
    else:
        values = [p.lhs / p.rhs if p.rhs > 0 else 0.0 for p in points]
    return summarize_refinement(
        family,
        [p.grid for p in points],
        [p.spacing for p in points],
        values,
        expectation=spec.expectation,
        max_variation=spec.max_variation,
    )


def regularity_ratio_study(
    family: str,
    grids: Sequence[int],
    data: str | None = None,
    params: Mapping[str, Any] | None = None,
    ceiling: float = 1e3,
    rho: float = DEFAULT_RHO,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> list[EstimateCheck]:
    """Per-grid ratio checks followed by one gating refinement check for the whole series."""
    points = study_points(family, grids, data, params, rho, workers, progress)
    checks = []
    for p in points:
        if p.rhs <= 0:
            checks.append(EstimateCheck(name=family, lhs=p.lhs, rhs=0.0, constant=float("nan"), passed=True, grid=p.grid, note="skipped: zero data"))
            continue
        checks.append(EstimateCheck.ratio(family, p.lhs, p.rhs, ceiling, grid=p.grid))
    summary = summarize_points(family, points)
    checks.append(refinement_check(summary, _family(family)))
    return checks


def refinement_check(summary: RefinementSummary, family: StudyFamily) -> EstimateCheck:
    """Gating record of a refinement summary."""
    if summary.expectation == "divergent":
        return EstimateCheck(
            name=f"{summary.name}_refinement",
            lhs=summary.slope,
            rhs=summary.r_squared,
            constant=summary.slope,
            passed=summary.passed,
            gating=True,
            note=f"divergent: monotone={summary.monotone} slope={summary.slope:.4g} r2={summary.r_squared:.4f}",
        )
    return EstimateCheck.inequality(
        f"{summary.name}_refinement",
        summary.variation,
        family.max_variation,
        gating=True,
        note=f"stable: ratios {', '.join(f'{v:.4g}' for v in summary.values)}",
    )
