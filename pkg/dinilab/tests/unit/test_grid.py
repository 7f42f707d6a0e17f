"""Tests for domains, sampled fields and staggered vector fields."""

from __future__ import annotations

import math

import numpy as np
import pytest


class TestDomain:
    """Test Domain construction and geometry."""

    def test_unit_square(self):
        """n nodes per side over [0, 1]^2."""
        from dinilab.grid import Domain

        d = Domain.unit_square(5)
        assert d.spacing == 0.25
        assert d.is_square
        assert d.x1 == 1.0
        assert d.diameter == pytest.approx(math.sqrt(2.0))

    def test_disk_mask(self):
        """The disk keeps nodes within the radius."""
        from dinilab.grid import Domain

        d = Domain.disk(9)
        assert d.shape == "disk"
        assert not d.is_square
        assert d.mask[4, 4]
        assert not d.mask[0, 0]
        assert d.diameter == pytest.approx(2.0)

    def test_invalid_arguments(self):
        """Bad spacing, size, shape or mask raise InvalidArgumentError."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.grid import Domain

        with pytest.raises(InvalidArgumentError):
            Domain(0.0, 0.0, 0.0, 0.1, 5, 5)
        with pytest.raises(InvalidArgumentError):
            Domain(0.0, 0.0, 0.1, 0.1, 1, 5)
        with pytest.raises(InvalidArgumentError):
            Domain(0.0, 0.0, 0.1, 0.1, 5, 5, shape="annulus")
        with pytest.raises(InvalidArgumentError):
            Domain(0.0, 0.0, 0.1, 0.1, 5, 5, mask=np.zeros((5, 5), dtype=bool))
        with pytest.raises(InvalidArgumentError):
            Domain(0.0, 0.0, 0.1, 0.1, 5, 5, shape="disk")

    def test_index_of(self):
        """Grid nodes map to their indices; other points are rejected."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.grid import Domain

        d = Domain.unit_square(5)
        assert d.index_of((0.5, 0.25)) == (2, 1)
        with pytest.raises(InvalidArgumentError, match="not a grid node"):
            d.index_of((0.3, 0.25))
        with pytest.raises(InvalidArgumentError, match="outside"):
            d.index_of((1.25, 0.0))

    def test_outside_distance_and_clamp(self):
        """Points beyond the square are measured and projected back."""
        from dinilab.grid import Domain

        d = Domain.unit_square(5)
        x, y = np.array([0.5, 1.3]), np.array([0.5, 0.5])
        np.testing.assert_allclose(d.outside_distance(x, y), [0.0, 0.3])
        cx, cy, moved = d.clamp(x, y)
        np.testing.assert_allclose(cx, [0.5, 1.0])
        np.testing.assert_array_equal(moved, [False, True])

    def test_disk_clamp(self):
        """Disk clamping projects radially onto the circle."""
        from dinilab.grid import Domain

        d = Domain.disk(9)
        cx, cy, moved = d.clamp(np.array([0.9]), np.array([0.9]))
        assert moved[0]
        assert math.hypot(cx[0], cy[0]) == pytest.approx(1.0)


class TestSampledField:
    """Test SampledField."""

    def test_from_function_and_sup(self):
        """Sampling evaluates on nodes; sup is over included points."""
        from dinilab.grid import Domain, SampledField

        f = SampledField.from_function(Domain.unit_square(5), lambda x, y: x - 2 * y)
        assert f.sup == pytest.approx(2.0)
        assert f.values[4, 0] == pytest.approx(1.0)

    def test_masked_values_are_zeroed(self):
        """Entries outside the mask are stored as zero."""
        from dinilab.grid import Domain, SampledField

        d = Domain.disk(9)
        f = SampledField(d, np.ones((9, 9)))
        assert f.values[0, 0] == 0.0
        assert f.sup == 1.0

    def test_rejects_nonfinite_and_shape(self):
        """Non-finite values and wrong shapes are rejected."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.grid import Domain, SampledField

        d = Domain.unit_square(5)
        with pytest.raises(InvalidArgumentError):
            SampledField(d, np.full((5, 5), np.nan))
        with pytest.raises(InvalidArgumentError):
            SampledField(d, np.zeros((4, 5)))

    def test_arithmetic(self):
        """Sums and scalings stay on the domain."""
        from dinilab.grid import Domain, SampledField

        d = Domain.unit_square(5)
        f = SampledField(d, np.ones((5, 5)))
        g = 2.0 * f - f + f
        np.testing.assert_array_equal(g.values, 2.0)

    def test_interpolant_reproduces_linear(self):
        """Bilinear interpolation is exact for linear data."""
        from dinilab.grid import Domain, SampledField

        f = SampledField.from_function(Domain.unit_square(9), lambda x, y: 3 * x + y)
        interp = f.interpolant()
        np.testing.assert_allclose(interp(np.array([0.31, 0.77]), np.array([0.12, 0.5])), [1.05, 2.81])

    def test_bicubic_order(self):
        """Only orders 1 and 3 are accepted."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.grid import Domain, SampledField

        f = SampledField.zeros(Domain.unit_square(5))
        assert f.interpolant(order=3).order == 3
        with pytest.raises(InvalidArgumentError):
            f.interpolant(order=2)


class TestVectorField:
    """Test staggered VectorField."""

    def test_shapes(self):
        """Components live on the two edge lattices."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.grid import Domain, VectorField

        d = Domain.unit_square(5)
        v = VectorField.zeros(d)
        assert v.v1.shape == (5, 4)
        assert v.v2.shape == (4, 5)
        with pytest.raises(InvalidArgumentError):
            VectorField(d, np.zeros((5, 5)), np.zeros((4, 5)))

    def test_divergence_free_rotation(self):
        """Rigid rotation has zero discrete divergence."""
        from dinilab.grid import Domain, VectorField

        v = VectorField.from_functions(Domain.unit_square(9), lambda x, y: -(y - 0.5), lambda x, y: x - 0.5)
        np.testing.assert_allclose(v.divergence(), 0.0, atol=1e-12)

    def test_divergence_of_linear_field(self):
        """(x, y) has divergence 2."""
        from dinilab.grid import Domain, VectorField

        v = VectorField.from_functions(Domain.unit_square(9), lambda x, y: x, lambda x, y: y)
        np.testing.assert_allclose(v.divergence(), 2.0)

    def test_nodal_and_interpolants(self):
        """Nodal averages and edge interpolants reproduce a constant field."""
        from dinilab.grid import Domain, VectorField

        d = Domain.unit_square(5)
        v = VectorField.from_functions(d, lambda x, y: 1.0 + 0 * x, lambda x, y: -2.0 + 0 * x)
        n1, n2 = v.nodal()
        assert n1.shape == (5, 5)
        np.testing.assert_allclose(n2, -2.0)
        i1, i2 = v.interpolants()
        np.testing.assert_allclose(i1(np.array([0.33]), np.array([0.71])), [1.0])
        assert v.sup == 2.0
