"""Study stage - the embeddings, regularity and transport suites."""

from __future__ import annotations

import dataclasses
import logging
from typing import Sequence

import numpy as np

from dinilab.checks import EstimateCheck
from dinilab.context import RunContext
from dinilab.elliptic.greens import greens_decay_checks
from dinilab.elliptic.regularity import FAMILIES, regularity_ratio_study
from dinilab.funcspace.cascade import CascadeLevel, cascade_series
from dinilab.funcspace.compose import GridMap, composition_check
from dinilab.funcspace.modulus import modulus_global
from dinilab.funcspace.quadrature import log_nodes
from dinilab.funcspace.seminorms import (
    DINI_KINDS,
    dini_integral,
    holder_cstar_bound,
    holderlog_cstar_bound,
    rescaling_check,
    seminorm_report,
)
from dinilab.funcspace.witness import MAX_CASCADE_DEPTH, make_witness
from dinilab.grid import Domain, SampledField
from dinilab.stages import register_stage
from dinilab.stages.base import BaseStage
from dinilab.stages.euler import solve_trajectory, trajectory_checks, write_trajectory
from dinilab.stages.seminorm import ordering_checks

logger = logging.getLogger(__name__)

EMBEDDING_GRID = 257
EMBEDDING_RHO = 0.5
HALVINGS = 5
INCREMENT = 0.05
CUTOFF_WITNESSES = (
    ("holderlog_alpha2", "holderlog", {"alpha": 2.0}, "stable"),
    ("log_reciprocal", "log_reciprocal", {}, "divergent"),
    ("holderlog_alpha05", "holderlog", {"alpha": 0.5}, "divergent"),
)
SMALL_GRID = 33
COMPOSITION_GRID = 65
COMPOSITION_RHO = 0.25
DELTAS = (1.0, 0.75, 0.5)
RESCALING_PAIRS = ((0.1, 0.2), (0.2, 0.4), (0.3, 0.6))
TRANSPORT_WITNESS = "bump_cascade"
CASCADE_DEPTHS = tuple(range(3, MAX_CASCADE_DEPTH + 1))
CASCADE_STEP = 0.05
CASCADE_SLACK = 0.5
CASCADE_DECAY = 0.75


def cutoff_series(f: SampledField, rho: float, r_los: Sequence[float], nodes: int = 256) -> list[float]:
    """[f]* for each lower cutoff, all read off one global modulus profile."""
    profile = modulus_global(f, log_nodes(min(r_los), rho, 2 * nodes))
    return [dini_integral(profile, r, rho, nodes) for r in r_los]


def cutoff_check(name: str, values: Sequence[float], expectation: str) -> EstimateCheck:
    """Stable series change by less than INCREMENT relative to the value on the last halving; divergent ones add at
    least INCREMENT on every halving."""
    increments = np.diff(values)
    note = "[f]* by halving: " + ", ".join(f"{v:.4g}" for v in values)
    if expectation == "stable":
        relative = float(increments[-1]) / max(abs(float(values[-1])), np.finfo(float).tiny)
        return EstimateCheck.inequality(f"{name}_cutoff_stable", relative, INCREMENT, gating=True, note=note)
    return EstimateCheck.inequality(f"{name}_cutoff_divergent", INCREMENT, float(increments.min()), gating=True, note=note)


def cascade_checks(levels: Sequence[CascadeLevel]) -> list[EstimateCheck]:
    """[f]* gains a harmonic step with every bump while the ⟨f⟩* steps die out faster.

    A divergent [f]* keeps depth·Δ[f]* from collapsing; a bounded ⟨f⟩* needs its increments to shrink
    clearly faster than those of [f]*.
    """
    depths = np.array([level.depth for level in levels], dtype=float)
    dc = np.diff([level.cstar for level in levels])
    db = np.diff([level.bstar for level in levels])
    note = "; ".join(f"d={level.depth}: [f]*={level.cstar:.4g} <f>*={level.bstar:.4g}" for level in levels)
    c_decay = float(dc[-1] / dc[0]) if dc[0] > 0 else 0.0
    b_decay = float(max(db[-1], 0.0) / db[0]) if db[0] > 0 else 0.0
    return [
        EstimateCheck.inequality("bump_cascade_cstar_growth", CASCADE_STEP, float(dc.min()), gating=True, note=note),
        EstimateCheck.inequality(
            "bump_cascade_cstar_divergent",
            CASCADE_SLACK * float(depths[1] * dc[0]),
            float(depths[-1] * dc[-1]),
            gating=True,
            note=note,
        ),
        EstimateCheck.inequality("bump_cascade_bstar_bounded", b_decay, CASCADE_DECAY * c_decay, gating=True, note=note),
    ]


def embeddings_suite(ctx: RunContext) -> list[EstimateCheck]:
    cfg = ctx.config
    checks: list[EstimateCheck] = []
    n = max(cfg.grid, EMBEDDING_GRID)
    domain = Domain.unit_square(n)
    h = domain.spacing
    r_los = [2.0 * h * 2.0**k for k in range(HALVINGS, -1, -1)]
    series = {}
    for name, kind, params, expectation in CUTOFF_WITNESSES:
        values = cutoff_series(make_witness(kind, params, domain), EMBEDDING_RHO, r_los, cfg.nodes)
        series[name] = {"r_lo": r_los, "cstar": values}
        checks.append(dataclasses.replace(cutoff_check(name, values, expectation), grid=n))
    ctx.write_json("cutoff_series.json", {"grid": n, "rho": EMBEDDING_RHO, "series": series})

    levels = cascade_series(CASCADE_DEPTHS)
    ctx.write_json("cascade_series.json", {"levels": [level.to_dict() for level in levels]})
    checks.extend(cascade_checks(levels))

    small = Domain.unit_square(COMPOSITION_GRID)
    cut = {"rho": EMBEDDING_RHO, "nodes": cfg.nodes}
    checks.append(dataclasses.replace(holder_cstar_bound(make_witness("holder", {"lam": 0.5}, small), 0.5, **cut), gating=True))
    checks.append(dataclasses.replace(holderlog_cstar_bound(make_witness("holderlog", {"alpha": 2.0}, small), 2.0, **cut), gating=True))

    for seed in range(10):
        f = make_witness("random_smooth", {"seed": cfg.seed + seed}, Domain.unit_square(SMALL_GRID))
        checks.extend(ordering_checks(seminorm_report(f, nodes=cfg.nodes), grid=SMALL_GRID))
        if seed < 5:
            for kind in DINI_KINDS:
                for rho1, rho2 in RESCALING_PAIRS:
                    pair = rescaling_check(f, kind, rho1, rho2, nodes=cfg.nodes)
                    checks.extend(dataclasses.replace(c, gating=True) for c in pair)

    maps = [(delta, GridMap.radial_power(small, delta)) for delta in DELTAS]
    constants = {delta: U.holder_constant(delta) for delta, U in maps}
    for seed in range(10):
        a = make_witness("random_smooth", {"seed": cfg.seed + seed}, small)
        for delta, U in maps:
            check = composition_check(a, U, delta, rho=COMPOSITION_RHO, nodes=cfg.nodes, holder_constant=constants[delta])
            checks.append(dataclasses.replace(check, gating=True))
    return checks


def regularity_suite(ctx: RunContext) -> list[EstimateCheck]:
    cfg = ctx.config
    checks: list[EstimateCheck] = []
    for family in FAMILIES:
        if ctx.ui:
            ctx.ui.status(f"Regularity family {family} on grids {', '.join(map(str, cfg.grids))}")
        checks.extend(regularity_ratio_study(family, cfg.grids, workers=cfg.threads))
    checks.extend(greens_decay_checks(seed=cfg.seed))
    return checks


def transport_suite(ctx: RunContext) -> list[EstimateCheck]:
    cfg = dataclasses.replace(ctx.config, forcing=None)
    trajectory = solve_trajectory(cfg, TRANSPORT_WITNESS, {}, ctx.ui)
    checks = trajectory_checks(trajectory, cfg, steady=False)
    write_trajectory(ctx, trajectory, prefix="transport_")
    transport = [c for c in checks if c.name == "bstar_transport"]
    if transport:
        logger.info("B* transport: smallest margin %.4g", min(c.margin for c in transport))
    return checks


SUITE_RUNNERS = {
    "embeddings": embeddings_suite,
    "regularity": regularity_suite,
    "transport": transport_suite,
}


@register_stage
class StudyStage(BaseStage):
    """Stage that runs one suite of estimate checks."""

    name = "study"
    command = "study"

    def run(self, ctx: RunContext) -> None:
        suite = ctx.config.suite
        if ctx.ui:
            ctx.ui.status(f"Suite {suite}")
        checks = SUITE_RUNNERS[suite](ctx)
        ctx.add_checks(checks)
        if ctx.ui:
            failed = sum(1 for c in checks if c.gating and not c.passed)
            ctx.ui.success(f"{len(checks)} checks, {failed} gating failure(s)")
