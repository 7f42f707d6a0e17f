"""Tests for the windowed Picard Euler solver."""

from __future__ import annotations

import numpy as np
import pytest


def _eigenvortex(n: int):
    """2π² sin πx sin πy, a steady solution in the unit square."""
    from dinilab.grid import Domain, SampledField

    return SampledField.from_function(
        Domain.unit_square(n), lambda x, y: 2.0 * np.pi**2 * np.sin(np.pi * x) * np.sin(np.pi * y)
    )


class TestWindowTimes:
    """Test window_times."""

    def test_even_windows(self):
        from dinilab.euler.solver import window_times

        windows = window_times(1.0, 0.25, 2)
        assert len(windows) == 4
        assert windows[0] == pytest.approx([0.0, 0.125, 0.25])
        assert windows[-1][-1] == 1.0

    def test_short_last_window(self):
        from dinilab.euler.solver import window_times

        windows = window_times(0.6, 0.25, 1)
        assert [w[0] for w in windows] == pytest.approx([0.0, 0.25, 0.5])
        assert windows[-1] == pytest.approx([0.5, 0.6])

    @pytest.mark.parametrize(("T", "window", "substeps"), [(1.0, 0.0, 2), (0.0, 0.25, 2), (1.0, 0.25, 0)])
    def test_invalid(self, T, window, substeps):
        from dinilab.errors import InvalidArgumentError
        from dinilab.euler.solver import window_times

        with pytest.raises(InvalidArgumentError):
            window_times(T, window, substeps)


class TestBoundB:
    """Test bound_B."""

    def test_unforced(self):
        from dinilab.euler.solver import bound_B

        zeta0 = _eigenvortex(9)
        assert bound_B(zeta0, None, 1.0) == zeta0.sup

    def test_constant_forcing(self):
        from dinilab.euler.solver import bound_B

        zeta0 = _eigenvortex(9)
        assert bound_B(zeta0, lambda t, x, y: 1.0 + 0.0 * x, 2.0) == pytest.approx(zeta0.sup + 2.0)


class TestPicardStep:
    """Test picard_step."""

    def test_zero_is_fixed(self):
        from dinilab.euler.solver import picard_step
        from dinilab.grid import Domain, SampledField

        zero = SampledField.zeros(Domain.unit_square(9))
        updated = picard_step([zero] * 3, [0.0, 0.1, 0.2], zero, None, 1.0)
        assert len(updated) == 3
        assert all(z.sup == 0.0 for z in updated)

    def test_membership_violation(self):
        """Guesses beyond the ball ‖θ‖ ≤ B are rejected."""
        from dinilab.errors import InvariantViolationError
        from dinilab.euler.solver import picard_step
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(9)
        big = SampledField(domain, np.full((9, 9), 2.0))
        with pytest.raises(InvariantViolationError):
            picard_step([big, big], [0.0, 0.1], big, None, 1.0)

    def test_one_guess_per_time(self):
        from dinilab.errors import InvalidArgumentError
        from dinilab.euler.solver import picard_step
        from dinilab.grid import Domain, SampledField

        zero = SampledField.zeros(Domain.unit_square(9))
        with pytest.raises(InvalidArgumentError, match="one vorticity guess"):
            picard_step([zero], [0.0, 0.1], zero, None, 1.0)


class TestEulerSolve:
    """Test euler_solve."""

    def test_zero_data(self):
        from dinilab.euler.solver import PicardSettings, euler_solve
        from dinilab.grid import Domain, SampledField

        seen = []
        trajectory = euler_solve(
            SampledField.zeros(Domain.unit_square(9)),
            T=0.5,
            window=0.25,
            settings=PicardSettings(substeps=2),
            progress=seen.append,
        )
        assert trajectory.times == pytest.approx([0.0, 0.125, 0.25, 0.375, 0.5])
        assert trajectory.output_times == pytest.approx([0.0, 0.25, 0.5])
        assert seen == pytest.approx([0.25, 0.5])
        assert trajectory.final.vorticity.sup == 0.0
        assert [w.iterations for w in trajectory.windows] == [1, 1]
        assert set(trajectory.histories) == {"sup", "cstar", "bstar", "dstar", "grad_v"}
        assert all(len(h) == 3 for h in trajectory.histories.values())
        assert trajectory.delta is None

    def test_state_lookup(self):
        from dinilab.errors import InvalidArgumentError
        from dinilab.euler.solver import PicardSettings, euler_solve
        from dinilab.grid import Domain, SampledField

        trajectory = euler_solve(
            SampledField.zeros(Domain.unit_square(9)),
            T=0.25,
            window=0.25,
            settings=PicardSettings(substeps=2),
            track_seminorms=False,
        )
        assert trajectory.state_at(0.125).t == pytest.approx(0.125)
        assert trajectory.histories == {}
        with pytest.raises(InvalidArgumentError, match="no state"):
            trajectory.state_at(0.2)

    def test_steady_eigenvortex(self):
        """The sine eigenmode stays put and each window reaches a fixed point."""
        from dinilab.euler.diagnostics import steady_state_check
        from dinilab.euler.solver import PicardSettings, euler_solve

        zeta0 = _eigenvortex(33)
        trajectory = euler_solve(
            zeta0,
            T=0.05,
            window=0.025,
            tol=1e-8,
            settings=PicardSettings(substeps=2),
            track_seminorms=False,
        )
        assert steady_state_check(trajectory).passed
        assert all(w.fixed_point_residual <= 2e-8 for w in trajectory.windows)
        assert trajectory.B == zeta0.sup

    def test_iteration_cap(self):
        """A window that cannot converge raises SolverFailureError."""
        from dinilab.errors import SolverFailureError
        from dinilab.euler.solver import PicardSettings, euler_solve

        with pytest.raises(SolverFailureError) as exc_info:
            euler_solve(
                _eigenvortex(17),
                T=0.1,
                window=0.1,
                tol=0.0,
                max_iters=1,
                settings=PicardSettings(substeps=2),
                track_seminorms=False,
            )
        assert exc_info.value.solver == "picard"
