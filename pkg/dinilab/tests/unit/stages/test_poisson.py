"""Tests for the Poisson stage."""

from __future__ import annotations

from pathlib import Path

import pytest


class TestResidualBound:
    """Test residual_bound."""

    def test_grows_with_refinement(self):
        from dinilab.stages.poisson import RESIDUAL_TOL, residual_bound

        assert residual_bound(33) == RESIDUAL_TOL
        assert residual_bound(129) == pytest.approx(4 * RESIDUAL_TOL)


class TestPoissonStage:
    """Test PoissonStage."""

    def test_eigen_sine(self, tmp_path: Path):
        """The sine eigenmode converges at second order and obeys the maximum principle."""
        from dinilab.config import RunConfig
        from dinilab.context import RunContext
        from dinilab.stages.poisson import ORDER_FLOOR, PoissonStage

        config = RunConfig(command="poisson", grid=33, grids=[9, 17, 33], witness="eigen_sine")
        ctx = RunContext(config=config, run_dir=tmp_path)
        PoissonStage().run(ctx)

        assert ctx.results["poisson_order"] >= ORDER_FLOOR
        by_name = {}
        for check in ctx.checks:
            by_name.setdefault(check.name, []).append(check)
        assert len(by_name["poisson_residual"]) == 3
        assert len(by_name["maximum_principle"]) == 3
        assert all(c.passed for c in by_name["poisson_residual"] + by_name["maximum_principle"] + by_name["poisson_order"])
        assert not any(c.gating for c in by_name["poisson_cstar_refinement"])
        for name in ("theta.field", "psi.field", "velocity.v1.field", "velocity.v2.field", "velocity.json"):
            assert (tmp_path / name).exists()
