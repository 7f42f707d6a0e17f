"""Tests for velocity and field time series."""

from __future__ import annotations

import numpy as np
import pytest


def _constant_velocity(n: int, a: float, b: float):
    from dinilab.grid import Domain, VectorField

    return VectorField(Domain.unit_square(n), np.full((n, n - 1), a), np.full((n - 1, n), b))


class TestTimeWeights:
    """Test time_weights."""

    def test_single_time(self):
        from dinilab.euler.series import time_weights

        assert time_weights(np.array([0.0]), 3.0) == (0, 0.0)

    def test_between_and_beyond(self):
        """Weights are clamped outside the recorded times."""
        from dinilab.euler.series import time_weights

        times = np.array([0.0, 1.0, 2.0])
        assert time_weights(times, 1.5) == (1, pytest.approx(0.5))
        assert time_weights(times, 5.0) == (1, 1.0)
        assert time_weights(times, -1.0) == (0, 0.0)


class TestVelocitySeries:
    """Test VelocitySeries."""

    def test_linear_in_time(self):
        """Halfway between two samples gives the average."""
        from dinilab.euler.series import VelocitySeries

        series = VelocitySeries([0.0, 1.0], [_constant_velocity(9, 1.0, 0.0), _constant_velocity(9, 3.0, -2.0)])
        u1, u2 = series(0.5, np.array([0.3, 0.7]), np.array([0.2, 0.9]))
        np.testing.assert_allclose(u1, 2.0)
        np.testing.assert_allclose(u2, -1.0)

    def test_steady_ignores_time(self):
        from dinilab.euler.series import VelocitySeries

        series = VelocitySeries.steady(_constant_velocity(9, 0.5, 0.25))
        u1, u2 = series(10.0, np.array([0.4]), np.array([0.6]))
        np.testing.assert_allclose(u1, 0.5)
        np.testing.assert_allclose(u2, 0.25)

    def test_times_must_increase(self):
        from dinilab.errors import InvalidArgumentError
        from dinilab.euler.series import VelocitySeries

        v = _constant_velocity(9, 0.0, 0.0)
        with pytest.raises(InvalidArgumentError, match="strictly increasing"):
            VelocitySeries([1.0, 0.5], [v, v])

    def test_one_time_per_field(self):
        from dinilab.errors import InvalidArgumentError
        from dinilab.euler.series import VelocitySeries

        with pytest.raises(InvalidArgumentError, match="one time per field"):
            VelocitySeries([0.0, 1.0], [_constant_velocity(9, 0.0, 0.0)])


class TestFieldSeries:
    """Test FieldSeries as a forcing."""

    def test_interpolates_values(self):
        from dinilab.euler.series import FieldSeries
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(9)
        series = FieldSeries([0.0, 2.0], [SampledField.zeros(domain), SampledField(domain, np.full((9, 9), 4.0))])
        np.testing.assert_allclose(series(0.5, np.array([0.1, 0.5]), np.array([0.3, 0.5])), 1.0)


class TestForcingHelpers:
    """Test forcing_sup, forcing_field and trapezoid."""

    def test_no_forcing(self):
        from dinilab.euler.series import forcing_sup
        from dinilab.grid import Domain

        assert forcing_sup(None, Domain.unit_square(9), 1.0) == 0.0

    def test_forcing_sup_and_field(self):
        """φ(t, x, y) = t x peaks at x = 1."""
        from dinilab.euler.series import forcing_field, forcing_sup
        from dinilab.grid import Domain

        domain = Domain.unit_square(9)
        phi = lambda t, x, y: t * x  # noqa: E731
        assert forcing_sup(phi, domain, 2.0) == pytest.approx(2.0)
        assert forcing_field(phi, domain, 2.0).values[-1, 4] == pytest.approx(2.0)

    def test_trapezoid(self):
        from dinilab.euler.series import trapezoid

        assert trapezoid([0.0, 1.0, 2.0], [0.0, 1.0, 2.0]) == pytest.approx(2.0)
        assert trapezoid([0.0], [5.0]) == 0.0
