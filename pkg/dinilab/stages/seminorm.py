"""Seminorm stage - every seminorm of one witness field, with ordering and rescaling checks."""

from __future__ import annotations

import dataclasses

from dinilab.checks import EstimateCheck
from dinilab.context import RunContext
from dinilab.funcspace.seminorms import (
    DINI_KINDS,
    SeminormReport,
    holder_cstar_bound,
    holderlog_cstar_bound,
    rescaling_check,
    seminorm_report,
)
from dinilab.funcspace.witness import make_witness
from dinilab.grid import SampledField
from dinilab.stages import register_stage
from dinilab.stages.base import BaseStage, make_domain


def ordering_checks(report: SeminormReport, grid: int | None = None) -> list[EstimateCheck]:
    """(f)* ≤ ⟨f⟩* ≤ [f]*, exact at shared cutoffs up to 1e-12."""
    tol = 1e-12 * max(report.cstar, 1.0)
    return [
        EstimateCheck.inequality("order_dstar_bstar", report.dstar, report.bstar, tol=tol, grid=grid, gating=True),
        EstimateCheck.inequality("order_bstar_cstar", report.bstar, report.cstar, tol=tol, grid=grid, gating=True),
    ]


def embedding_bounds(f: SampledField, report: SeminormReport) -> list[EstimateCheck]:
    """Hölder and Hölder-log embedding bounds for [f]* at the report cutoffs."""
    cut = {"rho": report.rho, "r_lo": report.r_lo, "nodes": report.nodes}
    checks = [holder_cstar_bound(f, lam, **cut) for lam in sorted(report.holder)]
    if report.rho < 1.0:
        checks.extend(holderlog_cstar_bound(f, alpha, **cut) for alpha in sorted(report.holderlog) if alpha > 1.0)
    return [dataclasses.replace(c, gating=True) for c in checks]


@register_stage
class SeminormStage(BaseStage):
    """Stage that measures one witness."""

    name = "seminorm"
    command = "seminorm"

    def run(self, ctx: RunContext) -> None:
        cfg = ctx.config
        ui = ctx.ui
        f = make_witness(cfg.witness, cfg.params, make_domain(cfg.shape, cfg.grid))
        if ui:
            ui.status(f"Witness {cfg.witness} on a {cfg.grid}-point {cfg.shape}")
        report = seminorm_report(f, rho=cfg.rho, r_lo=cfg.r_lo, nodes=cfg.nodes)
        ctx.results["report"] = report
        ctx.write_field("witness.field", f)
        ctx.write_json("seminorm.json", report.to_dict())

        checks = ordering_checks(report, grid=cfg.grid)
        checks.extend(embedding_bounds(f, report))
        rho2 = min(2.0 * report.rho, f.domain.diameter)
        if rho2 > report.rho:
            for kind in DINI_KINDS:
                checks.extend(dataclasses.replace(c, gating=True) for c in rescaling_check(f, kind, report.rho, rho2, r_lo=report.r_lo, nodes=cfg.nodes))
        ctx.add_checks(checks)
        if ui:
            ui.success(f"[f]* = {report.cstar:.6g}, <f>* = {report.bstar:.6g}, (f)* = {report.dstar:.6g}")
