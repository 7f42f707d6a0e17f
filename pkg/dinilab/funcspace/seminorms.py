"""Dini-type seminorms of sampled fields.

All three Dini seminorms integrate ω(r)/r over [r_lo, ρ] with the same trapezoid weights and the
same accumulation order, so the chain (f)* ≤ ⟨f⟩* ≤ [f]* holds exactly in floating point: the
integrands are ordered node by node and every weight is positive.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from dinilab.checks import EstimateCheck
from dinilab.errors import InvalidArgumentError
from dinilab.funcspace.modulus import (
    ModulusProfile,
    modulus_global,
    offset_table,
    pointwise_at_all_anchors,
    sphere_at_all_anchors,
)
from dinilab.funcspace.quadrature import (
    DEFAULT_NODES,
    dini_weights,
    log_nodes,
    nested_count,
    nested_cutoff,
    tail_excess,
    weighted_sum,
)
from dinilab.grid import FloatArray, SampledField

logger = logging.getLogger(__name__)

DINI_KINDS = ("cstar", "bstar", "dstar")


def dini_integral(profile: ModulusProfile, r_lo: float, r_hi: float, nodes: int = DEFAULT_NODES) -> float:
    """Trapezoid rule for ∫ ω(r)/r dr on ``nodes`` log-spaced radii in [r_lo, r_hi]."""
    if r_lo <= 0:
        raise InvalidArgumentError(f"lower cutoff must be positive, got r_lo={r_lo}")
    tol = 1e-12
    if profile.radii[0] > r_lo * (1 + tol) or profile.radii[-1] < r_hi * (1 - tol):
        raise InvalidArgumentError(
            f"profile covers [{profile.radii[0]:.4g}, {profile.radii[-1]:.4g}], not [{r_lo:.4g}, {r_hi:.4g}]"
        )
    radii = log_nodes(r_lo, r_hi, nodes)
    return float(weighted_sum(dini_weights(radii), profile.at(radii)))


def resolve_cutoffs(f: SampledField, rho: float | None = None, r_lo: float | None = None) -> tuple[float, float]:
    """Fill in the defaults r_lo = 2h and ρ = R/2 and validate the pair."""
    r_lo = 2.0 * f.domain.spacing if r_lo is None else float(r_lo)
    rho = 0.5 * f.domain.diameter if rho is None else float(rho)
    if r_lo <= 0:
        raise InvalidArgumentError(f"lower cutoff must be positive, got r_lo={r_lo}")
    if rho <= r_lo:
        raise InvalidArgumentError(f"upper cutoff {rho} must exceed lower cutoff {r_lo}")
    return rho, r_lo


def dini_table(f: SampledField, kind: str, radii: FloatArray, shell_width: float | None = None) -> FloatArray:
    """Modulus values at ``radii``: 1-D for ``cstar``, stacked per anchor for ``bstar``/``dstar``."""
    if kind == "cstar":
        return modulus_global(f, radii).omegas
    if kind == "bstar":
        return pointwise_at_all_anchors(f, radii)
    if kind == "dstar":
        return sphere_at_all_anchors(f, radii, shell_width, align="inner")
    raise InvalidArgumentError(f"unknown Dini seminorm {kind!r}, expected one of {DINI_KINDS}")


def reduce_table(f: SampledField, radii: FloatArray, table: FloatArray) -> float:
    """Integrate a modulus table and take the sup over anchors if it has them."""
    integral = weighted_sum(dini_weights(radii), table)
    if isinstance(integral, float):
        return integral
    return float(integral[f.domain.included].max())


def _dini_seminorm(
    f: SampledField,
    kind: str,
    rho: float | None,
    r_lo: float | None,
    nodes: int,
    shell_width: float | None = None,
) -> float:
    rho, r_lo = resolve_cutoffs(f, rho, r_lo)
    radii = log_nodes(r_lo, rho, nodes)
    return reduce_table(f, radii, dini_table(f, kind, radii, shell_width))


def seminorm_cstar(f: SampledField, rho: float | None = None, r_lo: float | None = None, nodes: int = DEFAULT_NODES) -> float:
    """[f]*: Dini integral of the global modulus."""
    return _dini_seminorm(f, "cstar", rho, r_lo, nodes)


def seminorm_bstar(f: SampledField, rho: float | None = None, r_lo: float | None = None, nodes: int = DEFAULT_NODES) -> float:
    """⟨f⟩*: largest Dini integral of the pointwise modulus over all anchors."""
    return _dini_seminorm(f, "bstar", rho, r_lo, nodes)


def seminorm_dstar(
    f: SampledField,
    rho: float | None = None,
    r_lo: float | None = None,
    nodes: int = DEFAULT_NODES,
    shell_width: float | None = None,
) -> float:
    """(f)*: as ⟨f⟩* with the sphere modulus on shells [r - w, r]."""
    return _dini_seminorm(f, "dstar", rho, r_lo, nodes, shell_width)


def norm_cstar(f: SampledField, **cutoffs: float | None) -> float:
    return seminorm_cstar(f, **cutoffs) + f.sup  # type: ignore[arg-type]


def norm_bstar(f: SampledField, **cutoffs: float | None) -> float:
    return seminorm_bstar(f, **cutoffs) + f.sup  # type: ignore[arg-type]


def norm_dstar(f: SampledField, **cutoffs: float | None) -> float:
    return seminorm_dstar(f, **cutoffs) + f.sup  # type: ignore[arg-type]


def _holderlog_from_table(lengths: FloatArray, maxima: FloatArray, alpha: float) -> float:
    below = lengths < 1.0
    if not below.any():
        return 0.0
    return float(np.max(maxima[below] * (-np.log(lengths[below])) ** alpha))


def _holder_from_table(lengths: FloatArray, maxima: FloatArray, lam: float) -> float:
    if len(lengths) == 0:
        return 0.0
    return float(np.max(maxima / lengths**lam))


def _check_alpha(alpha: float) -> None:
    if alpha <= 0:
        raise InvalidArgumentError(f"Hölder-log exponent must be positive, got alpha={alpha}")


def _check_lambda(lam: float) -> None:
    if not 0 < lam <= 1:
        raise InvalidArgumentError(f"Hölder exponent must lie in (0, 1], got lambda={lam}")


def seminorm_holderlog(f: SampledField, alpha: float) -> float:
    """max |f(x) - f(y)| (-log|x - y|)^α over pairs with 0 < |x - y| < 1."""
    _check_alpha(alpha)
    lengths, maxima = offset_table(f, min(1.0, f.domain.diameter))
    return _holderlog_from_table(lengths, maxima, alpha)


def seminorm_holder(f: SampledField, lam: float) -> float:
    """max |f(x) - f(y)| / |x - y|^λ over distinct pairs."""
    _check_lambda(lam)
    lengths, maxima = offset_table(f, f.domain.diameter)
    return _holder_from_table(lengths, maxima, lam)


@dataclass(frozen=True)
class SeminormReport:
    """Every seminorm of one field, with the cutoffs and quadrature that produced them."""

    cstar: float
    bstar: float
    dstar: float
    sup: float
    r_lo: float
    rho: float
    nodes: int
    shell_width: float
    holderlog: dict[float, float] = field(default_factory=dict)
    holder: dict[float, float] = field(default_factory=dict)

    @property
    def norm_cstar(self) -> float:
        return self.cstar + self.sup

    @property
    def norm_bstar(self) -> float:
        return self.bstar + self.sup

    @property
    def norm_dstar(self) -> float:
        return self.dstar + self.sup

    def to_dict(self) -> dict[str, object]:
        data = asdict(self)
        data["holderlog"] = {str(k): v for k, v in self.holderlog.items()}
        data["holder"] = {str(k): v for k, v in self.holder.items()}
        data["norm_cstar"] = self.norm_cstar
        data["norm_bstar"] = self.norm_bstar
        data["norm_dstar"] = self.norm_dstar
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def seminorm_report(
    f: SampledField,
    rho: float | None = None,
    r_lo: float | None = None,
    nodes: int = DEFAULT_NODES,
    alphas: Sequence[float] = (1.0, 2.0),
    lambdas: Sequence[float] = (0.5, 1.0),
    shell_width: float | None = None,
) -> SeminormReport:
    """Compute all seminorms of ``f`` sharing one set of cutoffs and one pair-difference table."""
    for alpha in alphas:
        _check_alpha(alpha)
    for lam in lambdas:
        _check_lambda(lam)
    rho, r_lo = resolve_cutoffs(f, rho, r_lo)
    radii = log_nodes(r_lo, rho, nodes)
    width = f.domain.spacing if shell_width is None else float(shell_width)
    lengths, maxima = offset_table(f, f.domain.diameter)
    report = SeminormReport(
        cstar=reduce_table(f, radii, dini_table(f, "cstar", radii)),
        bstar=reduce_table(f, radii, dini_table(f, "bstar", radii)),
        dstar=reduce_table(f, radii, dini_table(f, "dstar", radii, width)),
        sup=f.sup,
        r_lo=r_lo,
        rho=rho,
        nodes=nodes,
        shell_width=width,
        holderlog={float(a): _holderlog_from_table(lengths, maxima, a) for a in alphas},
        holder={float(lam): _holder_from_table(lengths, maxima, lam) for lam in lambdas},
    )
    logger.debug("seminorms: cstar=%.6g bstar=%.6g dstar=%.6g", report.cstar, report.bstar, report.dstar)
    return report


def rescaling_check(
    f: SampledField,
    kind: str,
    rho1: float,
    rho2: float,
    r_lo: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> tuple[EstimateCheck, EstimateCheck]:
    """Both sides of [f]_{ρ1} ≤ [f]_{ρ2} ≤ [f]_{ρ1} + 2 log(ρ2/ρ1)‖f‖.

    ρ2 is moved to the nearest cutoff whose log nodes extend those of ρ1, so both integrals share
    their first ``nodes`` radii and weights up to the last shared one. The upper side is allowed
    the trapezoid excess of ∫ dr/r over the tail.
    """
    rho1, r_lo = resolve_cutoffs(f, rho1, r_lo)
    if rho2 <= rho1:
        raise InvalidArgumentError(f"rho2={rho2} must exceed rho1={rho1}")
    count2 = nested_count(r_lo, rho1, nodes, rho2)
    radii = log_nodes(r_lo, nested_cutoff(r_lo, rho1, nodes, count2), count2)
    rho1_eff, rho2_eff = float(radii[nodes - 1]), float(radii[-1])
    table = dini_table(f, kind, radii)
    inner = reduce_table(f, radii[:nodes], table[:nodes])
    outer = reduce_table(f, radii, table)
    sup = f.sup
    penalty = 2.0 * math.log(rho2_eff / rho1_eff) * sup
    quad_tol = 2.0 * sup * tail_excess(radii, nodes - 1) + 1e-12 * max(outer, 1.0)
    note = f"rho1={rho1_eff:.6g} rho2={rho2_eff:.6g}"
    grid = f.domain.nx
    return (
        EstimateCheck.inequality(f"{kind}_rescaling_lower", inner, outer, tol=1e-12 * max(outer, 1.0), grid=grid, note=note),
        EstimateCheck.inequality(f"{kind}_rescaling_upper", outer, inner + penalty, tol=quad_tol, grid=grid, note=note),
    )


def holder_cstar_bound(
    f: SampledField, lam: float, rho: float | None = None, r_lo: float | None = None, nodes: int = DEFAULT_NODES
) -> EstimateCheck:
    """C^{0,λ} ⊂ C*: [f]* ≤ ([f]_{0,λ}/λ)(ρ^λ - r_lo^λ), allowing the trapezoid excess."""
    _check_lambda(lam)
    rho, r_lo = resolve_cutoffs(f, rho, r_lo)
    radii = log_nodes(r_lo, rho, nodes)
    weights = dini_weights(radii)
    lengths, maxima = offset_table(f, f.domain.diameter)
    holder = _holder_from_table(lengths, maxima, lam)
    cstar = reduce_table(f, radii, dini_table(f, "cstar", radii))
    exact = holder * (rho**lam - r_lo**lam) / lam
    discrete = holder * float(weighted_sum(weights, radii**lam))
    tol = max(discrete - exact, 0.0) + 1e-12 * max(discrete, 1.0)
    return EstimateCheck.inequality(
        "holder_cstar_embedding", cstar, exact, tol=tol, grid=f.domain.nx, note=f"lambda={lam} holder={holder:.6g}"
    )


def holderlog_integral(alpha: float, r_lo: float, rho: float) -> float:
    """∫_{r_lo}^{ρ} (-log r)^{-α} dr/r for ρ < 1."""
    u_lo, u_hi = -math.log(rho), -math.log(r_lo)
    if alpha == 1.0:
        return math.log(u_hi / u_lo)
    return (u_lo ** (1.0 - alpha) - u_hi ** (1.0 - alpha)) / (alpha - 1.0)


def holderlog_cstar_bound(
    f: SampledField, alpha: float, rho: float | None = None, r_lo: float | None = None, nodes: int = DEFAULT_NODES
) -> EstimateCheck:
    """D^{0,α} ⊂ C*: [f]* ≤ [f]_{0;α} ∫ (-log r)^{-α} dr/r, allowing the trapezoid excess."""
    _check_alpha(alpha)
    rho, r_lo = resolve_cutoffs(f, rho, r_lo)
    if rho >= 1.0:
        raise InvalidArgumentError(f"Hölder-log bound needs rho < 1, got {rho}")
    radii = log_nodes(r_lo, rho, nodes)
    weights = dini_weights(radii)
    lengths, maxima = offset_table(f, min(1.0, f.domain.diameter))
    holderlog = _holderlog_from_table(lengths, maxima, alpha)
    cstar = reduce_table(f, radii, dini_table(f, "cstar", radii))
    exact = holderlog * holderlog_integral(alpha, r_lo, rho)
    discrete = holderlog * float(weighted_sum(weights, (-np.log(radii)) ** (-alpha)))
    tol = max(discrete - exact, 0.0) + 1e-12 * max(discrete, 1.0)
    return EstimateCheck.inequality(
        "holderlog_cstar_embedding",
        cstar,
        exact,
        tol=tol,
        grid=f.domain.nx,
        note=f"alpha={alpha} holderlog={holderlog:.6g}",
    )
