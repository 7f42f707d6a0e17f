"""Tests for Dini, Hölder and Hölder-log seminorms."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest


def _square(n: int):
    from dinilab.grid import Domain

    return Domain.unit_square(n)


class TestCutoffs:
    """Test resolve_cutoffs and dini_integral."""

    def test_defaults(self):
        """r_lo defaults to 2h and ρ to half the diameter."""
        from dinilab.funcspace.seminorms import resolve_cutoffs
        from dinilab.grid import SampledField

        rho, r_lo = resolve_cutoffs(SampledField.zeros(_square(17)))
        assert r_lo == pytest.approx(0.125)
        assert rho == pytest.approx(math.sqrt(2.0) / 2)

    def test_inverted_cutoffs(self):
        """ρ must exceed r_lo."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.seminorms import resolve_cutoffs
        from dinilab.grid import SampledField

        with pytest.raises(InvalidArgumentError):
            resolve_cutoffs(SampledField.zeros(_square(17)), rho=0.1, r_lo=0.2)

    def test_dini_integral_of_profile(self):
        """A square-root profile tabulated on the quadrature nodes integrates to 2(√0.5 - 0.1)."""
        from dinilab.funcspace.modulus import ModulusProfile
        from dinilab.funcspace.quadrature import log_nodes
        from dinilab.funcspace.seminorms import dini_integral

        r = log_nodes(0.01, 0.5)
        profile = ModulusProfile(radii=r, omegas=np.sqrt(r), kind="global")
        assert dini_integral(profile, 0.01, 0.5) == pytest.approx(1.21421, abs=1e-4)

    def test_dini_integral_needs_coverage(self):
        """The profile must span the integration range."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.modulus import ModulusProfile
        from dinilab.funcspace.seminorms import dini_integral

        profile = ModulusProfile(radii=np.array([0.1, 0.2]), omegas=np.array([0.0, 1.0]), kind="global")
        with pytest.raises(InvalidArgumentError, match="covers"):
            dini_integral(profile, 0.05, 0.2)


class TestDiniSeminorms:
    """Test seminorm_cstar, seminorm_bstar and seminorm_dstar."""

    def test_constant_is_zero(self):
        """Constants have every seminorm zero."""
        from dinilab.funcspace.seminorms import seminorm_report
        from dinilab.funcspace.witness import make_witness

        report = seminorm_report(make_witness("constant", {"value": 2.0}, _square(17)))
        assert report.cstar == report.bstar == report.dstar == 0.0
        assert all(v == 0.0 for v in report.holder.values())
        assert all(v == 0.0 for v in report.holderlog.values())
        assert report.norm_cstar == 2.0

    def test_ordering_chain_exact(self, rng):
        """(f)* <= ⟨f⟩* <= [f]* holds without tolerance."""
        from dinilab.funcspace.seminorms import seminorm_report
        from dinilab.grid import SampledField

        domain = _square(17)
        for _ in range(20):
            f = SampledField(domain, rng.standard_normal((17, 17)))
            report = seminorm_report(f, nodes=64)
            assert report.dstar <= report.bstar <= report.cstar

    def test_single_kind_functions_match_report(self, rng):
        """The standalone seminorms agree with the report."""
        from dinilab.funcspace.seminorms import seminorm_bstar, seminorm_cstar, seminorm_dstar, seminorm_report
        from dinilab.grid import SampledField

        f = SampledField(_square(13), rng.standard_normal((13, 13)))
        report = seminorm_report(f, nodes=32)
        assert seminorm_cstar(f, nodes=32) == report.cstar
        assert seminorm_bstar(f, nodes=32) == report.bstar
        assert seminorm_dstar(f, nodes=32) == report.dstar

    def test_cone_bstar(self):
        """The cone's pointwise modulus is at most r, and nearly r at its apex."""
        from dinilab.funcspace.seminorms import seminorm_bstar
        from dinilab.funcspace.witness import make_witness

        f = make_witness("cone", domain=_square(65))
        rho, r_lo = 0.5, 2.0 / 64
        value = seminorm_bstar(f, rho=rho, r_lo=r_lo)
        assert value <= (rho - r_lo) * (1 + 1e-9)
        assert value >= 0.9 * (rho - r_lo)

    def test_homogeneity(self, rng):
        """Scaling a field scales its seminorms."""
        from dinilab.funcspace.seminorms import seminorm_cstar, seminorm_holderlog
        from dinilab.grid import SampledField

        f = SampledField(_square(9), rng.standard_normal((9, 9)))
        assert seminorm_holderlog(2.0 * f, 2.0) == 2.0 * seminorm_holderlog(f, 2.0)
        assert seminorm_cstar(3.0 * f, nodes=32) == pytest.approx(3.0 * seminorm_cstar(f, nodes=32), rel=1e-12)

    def test_unknown_kind(self):
        """dini_table rejects unknown kinds."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.seminorms import dini_table
        from dinilab.grid import SampledField

        with pytest.raises(InvalidArgumentError):
            dini_table(SampledField.zeros(_square(5)), "estar", np.array([0.5]))


class TestHolderSeminorms:
    """Test seminorm_holder and seminorm_holderlog."""

    def test_linear_field_lipschitz(self):
        """f = x has Lipschitz constant 1."""
        from dinilab.funcspace.seminorms import seminorm_holder
        from dinilab.funcspace.witness import make_witness

        f = make_witness("linear", domain=_square(17))
        assert seminorm_holder(f, 1.0) == pytest.approx(1.0)

    def test_holderlog_witness_is_bounded(self):
        """The Hölder-log witness has a finite [f]_{0;2} of order one."""
        from dinilab.funcspace.seminorms import seminorm_holderlog
        from dinilab.funcspace.witness import make_witness

        value = seminorm_holderlog(make_witness("holderlog", {"alpha": 2.0}, _square(65)), 2.0)
        assert 0.9 <= value <= 3.0

    def test_exponent_ranges(self):
        """λ must lie in (0, 1] and α must be positive."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.seminorms import seminorm_holder, seminorm_holderlog
        from dinilab.grid import SampledField

        f = SampledField.zeros(_square(5))
        with pytest.raises(InvalidArgumentError):
            seminorm_holder(f, 1.5)
        with pytest.raises(InvalidArgumentError):
            seminorm_holderlog(f, 0.0)


class TestEmbeddingBounds:
    """Test the Hölder and Hölder-log embeddings into C*."""

    def test_holder_bound(self):
        """[f]* of a λ-Hölder cone stays under its explicit bound."""
        from dinilab.funcspace.seminorms import holder_cstar_bound
        from dinilab.funcspace.witness import make_witness

        check = holder_cstar_bound(make_witness("holder", {"lam": 0.5}, _square(65)), 0.5, rho=0.5)
        assert check.passed
        assert check.name == "holder_cstar_embedding"

    def test_holderlog_bound(self):
        """[f]* of the Hölder-log witness stays under its explicit bound."""
        from dinilab.funcspace.seminorms import holderlog_cstar_bound
        from dinilab.funcspace.witness import make_witness

        check = holderlog_cstar_bound(make_witness("holderlog", {"alpha": 2.0}, _square(65)), 2.0, rho=0.5)
        assert check.passed

    def test_holderlog_bound_needs_rho_below_one(self):
        """The logarithmic weight is only defined for ρ < 1."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.seminorms import holderlog_cstar_bound
        from dinilab.grid import Domain, SampledField

        f = SampledField.zeros(Domain.disk(17, radius=2.0))
        with pytest.raises(InvalidArgumentError, match="rho < 1"):
            holderlog_cstar_bound(f, 2.0, rho=1.5)

    def test_holderlog_integral(self):
        """Closed form of ∫ (-log r)^{-α} dr/r."""
        from dinilab.funcspace.seminorms import holderlog_integral

        assert holderlog_integral(2.0, math.exp(-4), math.exp(-1)) == pytest.approx(0.75)
        assert holderlog_integral(1.0, math.exp(-4), math.exp(-1)) == pytest.approx(math.log(4))


class TestRescaling:
    """Test rescaling_check."""

    @pytest.mark.parametrize("kind", ["cstar", "bstar", "dstar"])
    def test_both_sides_pass(self, kind):
        """Enlarging ρ never lowers a seminorm and raises it by at most 2 log(ρ2/ρ1)‖f‖."""
        from dinilab.funcspace.seminorms import rescaling_check
        from dinilab.funcspace.witness import make_witness

        f = make_witness("random_smooth", {"seed": 3}, _square(33))
        lower, upper = rescaling_check(f, kind, 0.2, 0.4, nodes=64)
        assert lower.passed
        assert upper.passed
        assert lower.name == f"{kind}_rescaling_lower"

    def test_rho2_must_exceed_rho1(self):
        """ρ2 <= ρ1 is rejected."""
        from dinilab.errors import InvalidArgumentError
        from dinilab.funcspace.seminorms import rescaling_check
        from dinilab.grid import SampledField

        with pytest.raises(InvalidArgumentError):
            rescaling_check(SampledField.zeros(_square(9)), "cstar", 0.4, 0.3)


class TestSeminormReport:
    """Test SeminormReport serialization."""

    def test_to_json(self):
        """Exponent keys are strings and norms are included."""
        from dinilab.funcspace.seminorms import seminorm_report
        from dinilab.funcspace.witness import make_witness

        report = seminorm_report(make_witness("eigen_sine", domain=_square(17)), nodes=32)
        data = json.loads(report.to_json())
        assert set(data["holder"]) == {"0.5", "1.0"}
        assert data["norm_cstar"] == pytest.approx(report.cstar + report.sup)
        assert data["nodes"] == 32
