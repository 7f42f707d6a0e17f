"""Tests for regularity-ratio refinement studies."""

from __future__ import annotations

import pytest


class TestStudyPoints:
    """Test study_points and its argument checks."""

    def test_needs_three_grids(self):
        """Two grids cannot show a trend."""
        from dinilab.elliptic.regularity import study_points
        from dinilab.errors import InvalidArgumentError

        with pytest.raises(InvalidArgumentError, match="at least 3"):
            study_points("poisson_cstar", [17, 33])

    def test_unknown_family(self):
        """Unknown families are rejected by name."""
        from dinilab.elliptic.regularity import study_points
        from dinilab.errors import InvalidArgumentError

        with pytest.raises(InvalidArgumentError, match="unknown regularity family"):
            study_points("biharmonic", [17, 33, 65])

    def test_points_sorted_by_grid(self):
        """Points come back in refinement order with the progress callback called per grid."""
        from dinilab.elliptic.regularity import study_points

        seen = []
        points = study_points("poisson_cstar", [33, 17, 65], progress=seen.append)
        assert [p.grid for p in points] == [17, 33, 65]
        assert seen == [17, 33, 65]
        assert all(p.lhs > 0 and p.rhs > 0 for p in points)


class TestRegularityRatioStudy:
    """Test regularity_ratio_study."""

    def test_poisson_cstar_is_stable(self):
        """‖ψ‖_{C²}/‖θ‖_{C*} settles under refinement."""
        from dinilab.elliptic.regularity import regularity_ratio_study

        checks = regularity_ratio_study("poisson_cstar", [17, 33, 65])
        assert len(checks) == 4
        refinement = checks[-1]
        assert refinement.name == "poisson_cstar_refinement"
        assert refinement.gating
        assert refinement.passed
        assert all(c.passed for c in checks[:-1])

    def test_zero_data_is_skipped(self):
        """Zero data produce skipped per-grid records that still pass."""
        from dinilab.elliptic.regularity import regularity_ratio_study

        checks = regularity_ratio_study("poisson_cstar", [9, 17, 33], data="constant", params={"value": 0.0})
        assert all(c.passed for c in checks[:-1])
        assert all(c.note == "skipped: zero data" for c in checks[:-1])


class TestNorms:
    """Test the C^{1,1} and C^{0,1} norms."""

    def test_c01_of_linear_pressure(self):
        """x on the cell lattice has sup plus Lipschitz constant."""
        from dinilab.elliptic.regularity import c01_norm
        from dinilab.grid import Domain, SampledField

        p = SampledField.from_function(Domain.unit_square(9), lambda x, y: x)
        assert c01_norm(p) == pytest.approx(2.0)

    def test_c11_of_zero(self):
        """The zero velocity has zero norm."""
        from dinilab.elliptic.regularity import c11_norm
        from dinilab.grid import Domain, VectorField

        assert c11_norm(VectorField.zeros(Domain.unit_square(9))) == 0.0

    def test_edge_field_lattice(self):
        """Staggered components become fields on shifted lattices."""
        import numpy as np

        from dinilab.elliptic.regularity import edge_field
        from dinilab.grid import Domain

        domain = Domain.unit_square(9)
        f = edge_field(domain, np.zeros((9, 8)), 0)
        assert f.domain.y0 == pytest.approx(0.0625)
        assert (f.domain.nx, f.domain.ny) == (9, 8)


class TestFamilies:
    """Test every family end to end on small grids."""

    @pytest.mark.parametrize("family", ["poisson_cstar", "velocity_dstar", "stokes_dstar", "poisson_nondini", "velocity_holder"])
    def test_measures_positive_norms(self, family):
        import math

        from dinilab.elliptic.regularity import study_points

        points = study_points(family, [9, 17, 33])
        assert all(p.rhs > 0 for p in points)
        assert all(math.isfinite(p.lhs) and p.lhs >= 0 for p in points)


class TestSummaries:
    """Test summarize_points and refinement_check on synthetic series."""

    def _points(self, lhs, rhs):
        from dinilab.elliptic.regularity import StudyPoint

        grids = [17, 33, 65]
        return [StudyPoint(grid=n, spacing=1.0 / (n - 1), lhs=a, rhs=b) for n, a, b in zip(grids, lhs, rhs)]

    def test_stable_family_uses_ratios(self):
        from dinilab.elliptic.regularity import FAMILIES, refinement_check, summarize_points

        summary = summarize_points("poisson_cstar", self._points([2.0, 4.0, 8.0], [1.0, 2.0, 4.0]))
        assert summary.values == pytest.approx((2.0, 2.0, 2.0))
        check = refinement_check(summary, FAMILIES["poisson_cstar"])
        assert check.passed and check.gating
        assert check.name == "poisson_cstar_refinement"

    def test_divergent_family_uses_solution_norm(self):
        """Growth by a constant step per halving passes the divergence test."""
        from dinilab.elliptic.regularity import FAMILIES, refinement_check, summarize_points

        summary = summarize_points("poisson_nondini", self._points([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]))
        assert summary.values == pytest.approx((1.0, 2.0, 3.0))
        check = refinement_check(summary, FAMILIES["poisson_nondini"])
        assert check.passed
        assert check.note.startswith("divergent")

    def test_flat_divergent_series_fails(self):
        from dinilab.elliptic.regularity import FAMILIES, refinement_check, summarize_points

        summary = summarize_points("poisson_nondini", self._points([3.0, 3.0, 3.0], [1.0, 1.0, 1.0]))
        assert not refinement_check(summary, FAMILIES["poisson_nondini"]).passed
