"""Euler stage - windowed Picard solve, c1 calibration and the trajectory estimate checks."""

from __future__ import annotations

from typing import Any, Callable

from dinilab.checks import EstimateCheck
from dinilab.config import RunConfig
from dinilab.context import RunContext
from dinilab.euler.diagnostics import (
    calibrate,
    conservation_checks,
    diagnostics,
    fixed_point_checks,
    steady_state_check,
)
from dinilab.euler.series import Forcing
from dinilab.euler.solver import EulerTrajectory, PicardSettings, euler_solve
from dinilab.funcspace.witness import make_witness, witness_function, witness_params
from dinilab.grid import Domain, FloatArray
from dinilab.stages import register_stage
from dinilab.stages.base import BaseStage
from dinilab.ui import Console

STEADY_KINDS = frozenset({"eigen_sine"})


def steady_forcing(kind: str, params: dict[str, Any], domain: Domain) -> Forcing:
    """Time-independent forcing φ(s, x) = g(x) from a witness."""
    g = witness_function(kind, params, domain)

    def phi(s: float, x: FloatArray, y: FloatArray) -> FloatArray:
        return g(x, y)

    return phi


def is_steady_vortex(kind: str, params: dict[str, Any]) -> bool:
    """Single-mode sine vorticity is an exact steady state of the unforced flow."""
    return kind in STEADY_KINDS and tuple(witness_params(kind, params)["modes"]) == (1, 1)


def solve_trajectory(cfg: RunConfig, kind: str, params: dict[str, Any], ui: Console | None = None) -> EulerTrajectory:
    domain = Domain.unit_square(cfg.grid)
    zeta0 = make_witness(kind, params, domain)
    phi = steady_forcing(cfg.forcing, cfg.forcing_params, domain) if cfg.forcing else None
    settings = PicardSettings(
        substeps=cfg.substeps, rk_steps=cfg.rk_steps, order=cfg.interpolation_order, workers=cfg.threads
    )

    def solve(progress: Callable[[float], None] | None) -> EulerTrajectory:
        return euler_solve(
            zeta0,
            phi,
            T=cfg.t_final,
            window=cfg.window,
            tol=cfg.tol,
            max_iters=cfg.picard_iters,
            settings=settings,
            rho=cfg.rho,
            r_lo=cfg.r_lo,
            progress=progress,
        )

    if ui is None:
        return solve(None)
    with ui.progress(total=cfg.t_final, description="Picard windows") as task:
        return solve(task.update)


def trajectory_checks(trajectory: EulerTrajectory, cfg: RunConfig, steady: bool) -> list[EstimateCheck]:
    checks = calibrate(trajectory, seed=cfg.seed)
    checks.extend(fixed_point_checks(trajectory, cfg.tol))
    checks.extend(conservation_checks(trajectory))
    if steady:
        checks.append(steady_state_check(trajectory))
    checks.extend(diagnostics(trajectory, ceiling=cfg.ceiling))
    return checks


def trajectory_record(trajectory: EulerTrajectory) -> dict[str, Any]:
    """Histories and solver records at the window ends."""
    return {
        "B": trajectory.B,
        "T": trajectory.T,
        "c1": trajectory.c1,
        "delta": trajectory.delta,
        "cutoffs": list(trajectory.cutoffs) if trajectory.cutoffs else None,
        "times": trajectory.output_times,
        "histories": trajectory.histories,
        "windows": [
            {
                "t0": w.t0,
                "t1": w.t1,
                "residuals": w.residuals,
                "fixed_point_residual": w.fixed_point_residual,
                "contracting": w.contracting,
            }
            for w in trajectory.windows
        ],
    }


def write_trajectory(ctx: RunContext, trajectory: EulerTrajectory, prefix: str = "") -> None:
    ctx.write_field(f"{prefix}zeta0.field", trajectory.initial.vorticity)
    ctx.write_field(f"{prefix}zeta_final.field", trajectory.final.vorticity)
    ctx.write_vector_field(f"{prefix}velocity_final", trajectory.final.velocity)
    ctx.write_json(f"{prefix}trajectory.json", trajectory_record(trajectory))


@register_stage
class EulerStage(BaseStage):
    """Stage that solves 2-D Euler from the configured initial vorticity."""

    name = "euler"
    command = "euler"

    def run(self, ctx: RunContext) -> None:
        cfg = ctx.config
        ui = ctx.ui
        trajectory = solve_trajectory(cfg, cfg.witness, cfg.params, ui)
        if ui:
            iterations = ", ".join(str(w.iterations) for w in trajectory.windows)
            ui.status(f"B = {trajectory.B:.6g}; Picard iterations per window: {iterations}")
        steady = cfg.forcing is None and is_steady_vortex(cfg.witness, cfg.params)
        ctx.add_checks(trajectory_checks(trajectory, cfg, steady))
        ctx.results["trajectory"] = trajectory
        write_trajectory(ctx, trajectory)
        if ui:
            ui.success(f"Fitted c1 = {trajectory.c1:.6g}, δ(T) = {trajectory.delta:.6g}")
