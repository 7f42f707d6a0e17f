"""Tests for the Dirichlet Green's function of the unit disk."""

from __future__ import annotations

import math

import numpy as np
import pytest


class TestGreensDisk:
    """Test greens_disk and its gradient."""

    def test_known_value(self):
        """G((1/2, 0), 0) = log 2 / 2π."""
        from dinilab.elliptic.greens import greens_disk

        assert greens_disk((0.5, 0.0), (0.0, 0.0)) == pytest.approx(math.log(2.0) / (2.0 * math.pi))

    def test_vanishes_on_boundary(self):
        """G(x, y) = 0 for |x| = 1."""
        from dinilab.elliptic.greens import greens_disk

        phi = np.linspace(0.0, 2.0 * np.pi, 13)
        x = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        y = np.broadcast_to([0.3, -0.4], x.shape)
        assert np.abs(greens_disk(x, y)).max() < 1e-12

    def test_symmetric(self):
        """G(x, y) = G(y, x)."""
        from dinilab.elliptic.greens import greens_disk, sample_disk_pairs

        x, y = sample_disk_pairs(50, seed=4)
        np.testing.assert_array_equal(greens_disk(x, y), greens_disk(y, x))

    def test_positive_inside(self):
        """The Dirichlet Green's function of -Δ is positive in the open disk."""
        from dinilab.elliptic.greens import greens_disk, sample_disk_pairs

        x, y = sample_disk_pairs(100, seed=2)
        assert np.all(np.asarray(greens_disk(x, y)) > 0)

    def test_gradient_matches_finite_difference(self):
        """∇ₓG agrees with central differences."""
        from dinilab.elliptic.greens import greens_disk, greens_disk_gradient

        x, y, eps = np.array([0.2, 0.1]), np.array([-0.3, 0.4]), 1e-6
        grad = greens_disk_gradient(x, y)
        fd = [
            (greens_disk(x + eps * e, y) - greens_disk(x - eps * e, y)) / (2 * eps)
            for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        ]
        np.testing.assert_allclose(grad, fd, rtol=1e-6)

    def test_singularity(self):
        """x = y raises SingularityError."""
        from dinilab.elliptic.greens import greens_disk
        from dinilab.errors import SingularityError

        with pytest.raises(SingularityError):
            greens_disk((0.1, 0.2), (0.1, 0.2))

    def test_outside_disk(self):
        """Points outside the closed disk are rejected."""
        from dinilab.elliptic.greens import greens_disk
        from dinilab.errors import InvalidArgumentError

        with pytest.raises(InvalidArgumentError, match="closed unit disk"):
            greens_disk((1.5, 0.0), (0.0, 0.0))


class TestGreensPotential:
    """Test greens_potential."""

    def test_unit_source_at_centre(self):
        """∫G(0, y) dy = 1/4, the centre value of (1 - |x|²)/4."""
        from dinilab.elliptic.greens import greens_potential

        value = greens_potential(lambda x, y: np.ones_like(x), (0.0, 0.0))
        assert value == pytest.approx(0.25, abs=1e-6)

    def test_unit_source_off_centre(self):
        """Off-centre values follow (1 - |x|²)/4."""
        from dinilab.elliptic.greens import greens_potential

        value = greens_potential(lambda x, y: np.ones_like(x), (0.3, 0.2))
        assert value == pytest.approx((1.0 - 0.13) / 4.0, abs=1e-2)


class TestDecayChecks:
    """Test greens_decay_checks."""

    def test_all_pass(self):
        """Symmetry, boundary and both fitted decay constants pass."""
        from dinilab.elliptic.greens import greens_decay_checks

        checks = greens_decay_checks(count=500, seed=7)
        assert [c.name for c in checks] == [
            "greens_symmetry",
            "greens_boundary",
            "greens_value_decay",
            "greens_gradient_decay",
        ]
        assert all(c.passed for c in checks)
        assert all("analog" in c.note for c in checks[2:])
