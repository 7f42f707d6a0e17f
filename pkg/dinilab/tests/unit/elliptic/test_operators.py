"""Tests for lattice difference operators."""

from __future__ import annotations

import math

import numpy as np
import pytest


def _square(n: int):
    from dinilab.grid import Domain

    return Domain.unit_square(n)


def _sine(n: int):
    from dinilab.grid import SampledField

    return SampledField.from_function(_square(n), lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))


class TestRotAndCurl:
    """Test rot, curl and the staggered identities."""

    def test_rot_accuracy(self):
        """Forward differences onto the edges are second-order accurate."""
        from dinilab.elliptic.operators import rot
        from dinilab.grid import edge_points

        psi = _sine(65)
        v = rot(psi)
        (x1, y1), (x2, y2) = edge_points(psi.domain)
        X1, Y1 = np.meshgrid(x1, y1, indexing="ij")
        X2, Y2 = np.meshgrid(x2, y2, indexing="ij")
        exact1 = np.pi * np.sin(np.pi * X1) * np.cos(np.pi * Y1)
        exact2 = -np.pi * np.cos(np.pi * X2) * np.sin(np.pi * Y2)
        assert np.abs(v.v1 - exact1).max() < 1e-3
        assert np.abs(v.v2 - exact2).max() < 1e-3

    def test_rot_is_divergence_free(self, rng):
        """div rot vanishes up to rounding."""
        from dinilab.elliptic.operators import divergence, rot
        from dinilab.grid import SampledField

        domain = _square(17)
        v = rot(SampledField(domain, rng.standard_normal((17, 17))))
        assert np.abs(divergence(v)).max() <= 1e-9 * v.sup / domain.spacing

    def test_rot_tangent_to_walls(self):
        """A stream function vanishing on the boundary gives zero normal flux."""
        from dinilab.elliptic.operators import normal_trace, rot

        assert normal_trace(rot(_sine(17))) < 1e-12

    def test_curl_of_rotation(self):
        """Rigid rotation (-y, x) has vorticity 2 everywhere."""
        from dinilab.elliptic.operators import curl
        from dinilab.grid import VectorField

        v = VectorField.from_functions(_square(9), lambda x, y: -y, lambda x, y: x)
        np.testing.assert_allclose(curl(v).values, 2.0, rtol=1e-12)

    def test_curl_rot_is_minus_laplacian(self, rng):
        """curl∘rot equals the 5-point -Δ at interior nodes."""
        from dinilab.elliptic.operators import curl, laplacian_5pt, rot
        from dinilab.grid import SampledField

        psi = SampledField(_square(17), rng.standard_normal((17, 17)))
        np.testing.assert_allclose(curl(rot(psi)).values[1:-1, 1:-1], -laplacian_5pt(psi), rtol=1e-10, atol=1e-8)


class TestDerivativeNorms:
    """Test gradients, Hessians and difference quotients."""

    def test_lipschitz_of_linear(self):
        """2x + y has Lipschitz constant √5 and neighbour offsets reach it."""
        from dinilab.elliptic.operators import lipschitz_seminorm
        from dinilab.grid import SampledField

        g = SampledField.from_function(_square(9), lambda x, y: 2 * x + y)
        assert lipschitz_seminorm(g) == pytest.approx(math.sqrt(5.0))

    def test_c2_norm_of_sine(self):
        """The largest second derivative of sin πx sin πy is π²."""
        from dinilab.elliptic.operators import c2_norm

        assert c2_norm(_sine(65)) == pytest.approx(np.pi**2, rel=1e-2)

    def test_second_derivatives_of_quadratic(self):
        """One-sided edge stencils are exact for quadratics."""
        from dinilab.elliptic.operators import second_derivatives
        from dinilab.grid import SampledField

        f = SampledField.from_function(_square(9), lambda x, y: x**2 + 3 * x * y)
        fxx, fxy, fyy = second_derivatives(f)
        np.testing.assert_allclose(fxx, 2.0, atol=1e-9)
        np.testing.assert_allclose(fxy, 3.0, atol=1e-9)
        np.testing.assert_allclose(fyy, 0.0, atol=1e-9)

    def test_gradient_sup_of_shear(self):
        """v = (y, 0) has ‖∇v‖ = 1."""
        from dinilab.elliptic.operators import gradient_sup
        from dinilab.grid import VectorField

        v = VectorField.from_functions(_square(9), lambda x, y: y, lambda x, y: 0 * x)
        assert gradient_sup(v) == pytest.approx(1.0)

    def test_offsets_up_to(self):
        """Half-plane offsets within the radius, excluding zero."""
        from dinilab.elliptic.operators import offsets_up_to

        offsets = offsets_up_to(_square(5), 0.25)
        assert sorted(offsets) == [(0, 1), (1, 0)]

    def test_difference_quotient_power(self):
        """Hölder quotients divide by the distance to the given power."""
        from dinilab.elliptic.operators import difference_quotient

        values = np.array([[0.0], [1.0]])
        assert difference_quotient(values, 0.25, 1.0, [(1, 0)], power=0.5) == pytest.approx(2.0)
