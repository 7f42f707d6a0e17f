"""Composition of sampled fields with discrete maps of the domain into itself."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from dinilab.checks import EstimateCheck
from dinilab.errors import DomainEscapeError, InvalidArgumentError
from dinilab.funcspace.modulus import offset_slices, offsets_within
from dinilab.funcspace.quadrature import DEFAULT_NODES
from dinilab.funcspace.seminorms import resolve_cutoffs, seminorm_cstar
from dinilab.grid import Domain, FloatArray, GridInterpolant, SampledField

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GridMap:
    """Images ``(x[i, j], y[i, j])`` of the grid nodes under a map U."""

    domain: Domain
    x: FloatArray
    y: FloatArray

    def __post_init__(self) -> None:
        shape = (self.domain.nx, self.domain.ny)
        if np.shape(self.x) != shape or np.shape(self.y) != shape:
            raise InvalidArgumentError(f"map images must have the grid shape {shape}")
        if not (np.isfinite(self.x).all() and np.isfinite(self.y).all()):
            raise InvalidArgumentError("map images must be finite")

    @classmethod
    def identity(cls, domain: Domain) -> GridMap:
        X, Y = domain.mesh()
        return cls(domain, X, Y)

    @classmethod
    def rotation(cls, domain: Domain, angle: float, center: tuple[float, float] | None = None) -> GridMap:
        """Rigid rotation by ``angle`` about ``center`` (the box centre by default)."""
        cx, cy = center if center is not None else _box_center(domain)
        X, Y = domain.mesh()
        c, s = math.cos(angle), math.sin(angle)
        return cls(domain, cx + c * (X - cx) - s * (Y - cy), cy + s * (X - cx) + c * (Y - cy))

    @classmethod
    def radial_power(
        cls,
        domain: Domain,
        delta: float,
        center: tuple[float, float] | None = None,
        radius: float | None = None,
    ) -> GridMap:
        """Direction-preserving p ↦ c + R (|p - c|/R)^δ (p - c)/|p - c|; δ-Hölder, fixes the disk of radius R."""
        if not 0 < delta <= 1:
            raise InvalidArgumentError(f"Hölder exponent must lie in (0, 1], got delta={delta}")
        cx, cy = center if center is not None else _box_center(domain)
        R = radius if radius is not None else 0.5 * (domain.x1 - domain.x0)
        X, Y = domain.mesh()
        r = np.hypot(X - cx, Y - cy)
        scale = np.where(r > 0, R * (r / R) ** delta / np.where(r > 0, r, 1.0), 0.0)
        return cls(domain, cx + scale * (X - cx), cy + scale * (Y - cy))

    def holder_constant(self, delta: float) -> float:
        """max |U(p) - U(q)| / |p - q|^δ over pairs of included nodes."""
        domain = self.domain
        inc = domain.included
        best = 0.0
        A, B, D = offsets_within(domain, domain.diameter)
        for a, b, d in zip(A.tolist(), B.tolist(), D.tolist()):
            sx, tx = offset_slices(domain.nx, a)
            sy, ty = offset_slices(domain.ny, b)
            valid = inc[sx, sy] & inc[tx, ty]
            if not valid.any():
                continue
            moved = np.hypot(self.x[tx, ty] - self.x[sx, sy], self.y[tx, ty] - self.y[sx, sy])[valid]
            best = max(best, float(moved.max()) / d**delta)
        return best


def _box_center(domain: Domain) -> tuple[float, float]:
    return 0.5 * (domain.x0 + domain.x1), 0.5 * (domain.y0 + domain.y1)


def _extend_outside_mask(f: SampledField) -> FloatArray:
    """Copy each excluded node's value from its nearest included node."""
    if f.domain.mask is None:
        return f.values
    _, (ii, jj) = ndimage.distance_transform_edt(~f.domain.mask, return_indices=True)
    return f.values[ii, jj]


def compose(a: SampledField, U: GridMap, order: int = 1) -> SampledField:
    """Field x ↦ a(U(x)), interpolating ``a`` off the grid.

    Raises DomainEscapeError when an included node is mapped more than half a spacing outside.
    """
    if (U.domain.nx, U.domain.ny) != (a.domain.nx, a.domain.ny):
        raise InvalidArgumentError("map and field live on different grids")
    domain = a.domain
    inc = domain.included
    outside = domain.outside_distance(U.x, U.y)
    escaped = inc & (outside > 0.5 * domain.spacing)
    if escaped.any():
        raise DomainEscapeError(list(zip(U.x[escaped].tolist(), U.y[escaped].tolist())))
    interp = GridInterpolant(_extend_outside_mask(a), (domain.x0, domain.y0), (domain.dx, domain.dy), order)
    return SampledField(domain, np.where(inc, interp(U.x, U.y), 0.0))


def composition_check(
    a: SampledField,
    U: GridMap,
    delta: float,
    rho: float | None = None,
    r_lo: float | None = None,
    slack: float = 0.05,
    nodes: int = DEFAULT_NODES,
    holder_constant: float | None = None,
) -> EstimateCheck:
    """[a∘U]* ≤ (1/δ)[a]* for a δ-Hölder map U.

    ω_{a∘U}(r) ≤ ω_a(K r^δ), so after τ = K r^δ the right side integrates ω_a between the image
    cutoffs K r_lo^δ and K ρ^δ, with K the measured Hölder constant of U.
    """
    rho, r_lo = resolve_cutoffs(a, rho, r_lo)
    K = U.holder_constant(delta) if holder_constant is None else holder_constant
    composed = compose(a, U)
    lhs = seminorm_cstar(composed, rho=rho, r_lo=r_lo, nodes=nodes)
    tau_lo, tau_hi = K * r_lo**delta, K * rho**delta
    if K <= 0 or tau_hi <= tau_lo:
        rhs = 0.0
    else:
        rhs = seminorm_cstar(a, rho=tau_hi, r_lo=tau_lo, nodes=nodes) / delta
    logger.debug("composition: K=%.4g lhs=%.6g rhs=%.6g", K, lhs, rhs)
    return EstimateCheck.inequality(
        "composition",
        lhs,
        rhs,
        tol=slack * rhs + 1e-12,
        grid=a.domain.nx,
        note=f"delta={delta} K={K:.6g} tau=[{tau_lo:.4g}, {tau_hi:.4g}]",
    )
