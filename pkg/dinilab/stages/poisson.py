"""Poisson stage - solve on each grid, then residual, maximum-principle and convergence checks."""

from __future__ import annotations

import dataclasses

import numpy as np

from dinilab.checks import EstimateCheck
from dinilab.context import RunContext
from dinilab.elliptic.poisson import poisson_convergence, poisson_residual, poisson_solve, velocity_from_vorticity
from dinilab.elliptic.regularity import regularity_ratio_study
from dinilab.funcspace.witness import make_witness
from dinilab.grid import Domain
from dinilab.stages import register_stage
from dinilab.stages.base import BaseStage

RESIDUAL_TOL = 1e-12
ORDER_FLOOR = 1.9


def residual_bound(n: int) -> float:
    """Relative residual allowance; round-off in -Δ₅ψ grows like h⁻²."""
    return RESIDUAL_TOL * max(1.0, ((n - 1) / 64) ** 2)


@register_stage
class PoissonStage(BaseStage):
    """Stage that solves -Δψ = θ for the configured data."""

    name = "poisson"
    command = "poisson"

    def run(self, ctx: RunContext) -> None:
        cfg = ctx.config
        ui = ctx.ui
        checks: list[EstimateCheck] = []
        for n in cfg.grids:
            theta = make_witness(cfg.witness, cfg.params, Domain.unit_square(n))
            psi = poisson_solve(theta, workers=cfg.threads)
            checks.append(
                EstimateCheck.inequality("poisson_residual", poisson_residual(psi, theta), residual_bound(n), grid=n, gating=True)
            )
            if np.all(theta.values >= 0):
                floor = float(psi.values.min())
                checks.append(
                    EstimateCheck.inequality(
                        "maximum_principle", -floor, 1e-14 * max(psi.sup, 1.0), grid=n, gating=True, note="nonnegative data"
                    )
                )
            if ui:
                ui.status(f"grid {n}: max |ψ| = {psi.sup:.6g}")
        ctx.write_field("theta.field", theta)
        ctx.write_field("psi.field", psi)
        ctx.write_vector_field("velocity", velocity_from_vorticity(theta, workers=cfg.threads))

        errors, order = poisson_convergence(cfg.grids, workers=cfg.threads)
        checks.append(
            EstimateCheck.inequality(
                "poisson_order",
                ORDER_FLOOR,
                order,
                grid=cfg.grids[-1],
                gating=True,
                note="eigenfunction errors " + ", ".join(f"{e:.3e}" for e in errors),
            )
        )
        ctx.results["poisson_order"] = order
        if len(cfg.grids) >= 3:
            study = regularity_ratio_study("poisson_cstar", cfg.grids, data=cfg.witness, params=cfg.params, workers=cfg.threads)
            checks.extend(dataclasses.replace(c, gating=False) for c in study)
        ctx.add_checks(checks)
        if ui:
            ui.success(f"Observed order {order:.3f} on grids {', '.join(map(str, cfg.grids))}")
