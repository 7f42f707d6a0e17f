"""Tests for composition with grid maps."""

from __future__ import annotations

import math

import numpy as np
import pytest


class TestGridMap:
    """Test GridMap constructors and Hölder constants."""

    def test_identity_is_lipschitz_one(self):
        """The identity has Hölder-1 constant one."""
        from dinilab.funcspace.compose import GridMap
        from dinilab.grid import Domain

        assert GridMap.identity(Domain.unit_square(9)).holder_constant(1.0) == pytest.approx(1.0)

    def test_radial_power_delta_one_is_identity(self):
        """δ = 1 leaves every node in place."""
        from dinilab.funcspace.compose import GridMap
        from dinilab.grid import Domain

        domain = Domain.unit_square(9)
        U = GridMap.radial_power(domain, 1.0)
        X, Y = domain.mesh()
        np.testing.assert_allclose(U.x, X, atol=1e-14)
        np.testing.assert_allclose(U.y, Y, atol=1e-14)
        assert U.holder_constant(1.0) == pytest.approx(1.0)

    def test_radial_power_fixes_boundary_circle(self):
        """Points at distance R from the centre stay put."""
        from dinilab.funcspace.compose import GridMap
        from dinilab.grid import Domain

        domain = Domain.unit_square(9)
        U = GridMap.radial_power(domain, 0.5)
        i, j = domain.index_of((1.0, 0.5))
        assert (U.x[i, j], U.y[i, j]) == pytest.approx((1.0, 0.5))

    def test_radial_power_exponent_range(self):
        """δ outside (0, 1] is rejected."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.compose import GridMap
        from dinilab.grid import Domain

        with pytest.raises(InvalidArgumentError):
            GridMap.radial_power(Domain.unit_square(9), 1.5)

    def test_shape_mismatch(self):
        """Images must have the grid shape."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.compose import GridMap
        from dinilab.grid import Domain

        with pytest.raises(InvalidArgumentError):
            GridMap(Domain.unit_square(5), np.zeros((4, 5)), np.zeros((5, 5)))


class TestCompose:
    """Test compose."""

    def test_identity(self, rng):
        """Composing with the identity returns the field."""
        from dinilab.funcspace.compose import GridMap, compose
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(17)
        a = SampledField(domain, rng.standard_normal((17, 17)))
        np.testing.assert_allclose(compose(a, GridMap.identity(domain)).values, a.values, atol=1e-12)

    def test_rotation_preserves_cstar(self):
        """A quarter turn of the disk maps the lattice to itself and keeps [a]*."""
        from dinilab.funcspace.compose import GridMap, compose
        from dinilab.funcspace.seminorms import seminorm_cstar
        from dinilab.funcspace.witness import make_witness
        from dinilab.grid import Domain

        domain = Domain.disk(65)
        a = make_witness("gaussian", {"width": 0.3, "center": (0.2, 0.1)}, domain)
        rotated = compose(a, GridMap.rotation(domain, 0.5 * math.pi))
        before = seminorm_cstar(a, nodes=64)
        after = seminorm_cstar(rotated, nodes=64)
        assert after == pytest.approx(before, rel=0.02)

    def test_escape_raises(self):
        """Shifting past half a spacing outside the square raises DomainEscapeError."""
        from dinilab.errors import DomainEscapeError
        from dinilab.funcspace.compose import GridMap, compose
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(9)
        X, Y = domain.mesh()
        with pytest.raises(DomainEscapeError) as exc_info:
            compose(SampledField.zeros(domain), GridMap(domain, X + 0.2, Y))
        assert len(exc_info.value.points) == 2 * 9

    def test_small_overshoot_is_clamped(self):
        """Overshoot below half a spacing takes the edge value."""
        from dinilab.funcspace.compose import GridMap, compose
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(9)
        X, Y = domain.mesh()
        a = SampledField.from_function(domain, lambda x, y: x)
        composed = compose(a, GridMap(domain, X + 0.05, Y))
        assert composed.values[-1, 0] == pytest.approx(1.0)


class TestCompositionCheck:
    """Test composition_check."""

    def test_radial_power_passes(self):
        """[a∘U]* <= (1/δ)[a]* over the image cutoffs for a square-root radial map."""
        from dinilab.funcspace.compose import GridMap, composition_check
        from dinilab.funcspace.witness import make_witness
        from dinilab.grid import Domain

        domain = Domain.unit_square(33)
        a = make_witness("gaussian", {"width": 0.15, "center": (0.3, 0.3)}, domain)
        check = composition_check(a, GridMap.radial_power(domain, 0.5), 0.5, rho=0.25, nodes=64)
        assert check.passed
        assert "delta=0.5" in check.note

    def test_identity_is_tight(self, rng):
        """With U the identity and δ = 1 both sides agree."""
        from dinilab.funcspace.compose import GridMap, composition_check
        from dinilab.grid import Domain, SampledField

        domain = Domain.unit_square(17)
        a = SampledField(domain, rng.standard_normal((17, 17)))
        check = composition_check(a, GridMap.identity(domain), 1.0, rho=0.5, nodes=64, holder_constant=1.0)
        assert check.passed
        assert check.lhs == pytest.approx(check.rhs, rel=1e-9)
