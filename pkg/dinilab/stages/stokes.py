"""Stokes stage - manufactured convergence plus a solve for the configured forcing."""

from __future__ import annotations

import numpy as np

from dinilab.checks import EstimateCheck
from dinilab.context import RunContext
from dinilab.elliptic.regularity import DEFAULT_RHO, c01_norm, c11_norm, edge_field
from dinilab.elliptic.stokes import reflection_errors, stokes_convergence, stokes_solve
from dinilab.funcspace.seminorms import norm_dstar
from dinilab.funcspace.witness import witness_function
from dinilab.grid import Domain, SampledField, VectorField
from dinilab.stages import register_stage
from dinilab.stages.base import BaseStage

VELOCITY_ORDER_FLOOR = 1.8
PRESSURE_ORDER_FLOOR = 1.0
DIVERGENCE_TOL = 1e-10
REFLECTION_TOL = 1e-10


def component_fields(v: VectorField) -> tuple[SampledField, SampledField]:
    """Each staggered component as a field on its own edge lattice."""
    return edge_field(v.domain, v.v1, 0), edge_field(v.domain, v.v2, 1)


def reflection_check(n: int, tol: float, max_iters: int, workers: int = 1) -> EstimateCheck:
    """The uniform force (1, 0) is mirror symmetric about the mid-line in y, and so must be the flow."""
    domain = Domain.unit_square(n)
    f = VectorField.from_functions(domain, lambda x, y: np.ones_like(x), lambda x, y: np.zeros_like(x))
    solution = stokes_solve(f, tol=tol, max_iters=max_iters, workers=workers)
    even, odd = reflection_errors(solution.velocity)
    return EstimateCheck.inequality(
        "stokes_reflection",
        max(even, odd),
        REFLECTION_TOL,
        grid=n,
        gating=True,
        note=f"v1 {even:.2e}, v2 {odd:.2e}, max |u| {solution.velocity.sup:.2e}, CG iterations {solution.iterations}",
    )


@register_stage
class StokesStage(BaseStage):
    """Stage that verifies and runs the MAC Stokes solver."""

    name = "stokes"
    command = "stokes"

    def run(self, ctx: RunContext) -> None:
        cfg = ctx.config
        ui = ctx.ui
        pair = cfg.grids[-2:]
        u_errors, p_errors, u_order, p_order = stokes_convergence(pair, tol=cfg.tol, workers=cfg.threads)
        checks = [
            EstimateCheck.inequality(
                "stokes_velocity_order",
                VELOCITY_ORDER_FLOOR,
                u_order,
                grid=pair[-1],
                gating=True,
                note="manufactured errors " + ", ".join(f"{e:.3e}" for e in u_errors),
            ),
            EstimateCheck.inequality(
                "stokes_pressure_order",
                PRESSURE_ORDER_FLOOR,
                p_order,
                grid=pair[-1],
                note="manufactured errors " + ", ".join(f"{e:.3e}" for e in p_errors),
            ),
        ]
        if ui:
            ui.status(f"Manufactured solution: velocity order {u_order:.3f}, pressure order {p_order:.3f}")

        n = cfg.grids[-1]
        domain = Domain.unit_square(n)
        g = witness_function(cfg.witness, cfg.params, domain)
        f = VectorField.from_functions(domain, g, g)
        solution = stokes_solve(f, tol=cfg.tol, max_iters=cfg.max_iters, workers=cfg.threads)
        divergence = float(np.abs(solution.velocity.divergence()).max())
        checks.append(
            EstimateCheck.inequality(
                "stokes_divergence", divergence, DIVERGENCE_TOL, grid=n, gating=True, note=f"CG iterations {solution.iterations}"
            )
        )
        checks.append(reflection_check(n, cfg.tol, cfg.max_iters, cfg.threads))
        cut = {"rho": DEFAULT_RHO, "r_lo": 2.0 / (cfg.grids[0] - 1)}
        data_norm = max(norm_dstar(c, **cut) for c in component_fields(f))
        checks.append(
            EstimateCheck.ratio(
                "stokes_lipschitz_ratio",
                c11_norm(solution.velocity) + c01_norm(solution.pressure),
                data_norm,
                1e3,
                grid=n,
            )
        )
        ctx.write_vector_field("forcing", f)
        ctx.write_vector_field("velocity", solution.velocity)
        ctx.write_field("pressure.field", solution.pressure)
        ctx.write_json("cg_residuals.json", {"grid": n, "residuals": solution.residuals})
        ctx.add_checks(checks)
        if ui:
            ui.success(f"Solved on {n}x{n} in {solution.iterations} CG iterations, max |div u| = {divergence:.2e}")
