"""Pipeline orchestration: run the stages of one command and write the manifest."""

from __future__ import annotations

import logging
import time

from dinilab.checks import all_gating_passed
from dinilab.config import RunConfig, config_hash, run_directory, save_config
from dinilab.context import RunContext
from dinilab.errors import LabError, StageFailedError
from dinilab.manifest import RunManifest, build_manifest
from dinilab.stages import get_all_stages, register_stage
from dinilab.stages.base import BaseStage, Stage
from dinilab.stages.euler import EulerStage
from dinilab.stages.poisson import PoissonStage
from dinilab.stages.seminorm import SeminormStage
from dinilab.stages.stokes import StokesStage
from dinilab.stages.study import StudyStage
from dinilab.ui import Console

logger = logging.getLogger(__name__)

COMMAND_STAGES = (SeminormStage, PoissonStage, StokesStage, EulerStage, StudyStage)


@register_stage
class ReportStage(BaseStage):
    """Stage that writes the resolved config and the check table."""

    name = "report"

    def run(self, ctx: RunContext) -> None:
        ctx.emit(save_config(ctx.config, ctx.run_dir / "config.json"))
        ctx.write_checks()
        if ctx.ui:
            ctx.ui.checks_table(ctx.checks)


def pipeline_stages(ctx: RunContext) -> list[Stage]:
    """Registered stages taking part in this run, report last."""
    return [stage_class() for stage_class in get_all_stages() if stage_class().applies(ctx)]


def run_pipeline(ctx: RunContext) -> None:
    """Execute every applicable stage; library errors are wrapped with the stage name."""
    ui = ctx.ui
    stages = pipeline_stages(ctx)
    if ui:
        ui.set_total_stages(len(stages))
    for stage in stages:
        if ui:
            ui.stage(stage.name.replace("_", " ").title())
        try:
            stage.run(ctx)
        except StageFailedError:
            raise
        except LabError as e:
            raise StageFailedError(stage.name, e) from e
        ctx.mark_completed(stage.name)
        logger.debug("stage %s completed", stage.name)


def run(config: RunConfig, ui: Console | None = None) -> RunManifest:
    """Run the configured command into its own directory and return the written manifest."""
    started = time.perf_counter()
    ctx = RunContext(config=config, run_dir=run_directory(config), ui=ui)
    ctx.run_dir.mkdir(parents=True, exist_ok=True)
    logger.info("run directory %s", ctx.run_dir)
    run_pipeline(ctx)
    manifest = build_manifest(
        command=config.command,
        config_hash=config_hash(config),
        threads=config.threads,
        directory=ctx.run_dir,
        paths=ctx.outputs,
        checks=ctx.checks,
        wall_clock=time.perf_counter() - started,
    )
    manifest.write(ctx.run_dir)
    logger.info("gating checks passed: %s", all_gating_passed(ctx.checks))
    return manifest
