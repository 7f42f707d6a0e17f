"""Dini seminorms of the bump cascade, one resolved grid per bump.

While ρ stays below half the smallest gap between supports, a ball of radius ρ meets at most one bump.
The global modulus is then the largest single-bump modulus and the pointwise modulus at any anchor is
the one of the nearest bump, so both seminorms reduce to a max over bumps. Each bump is sampled on its
own box with a fixed number of spacings per radius, which resolves the finest level as well as the
coarsest one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from dinilab.errors import InvalidArgumentError
from dinilab.funcspace.modulus import modulus_global, pointwise_at_all_anchors
from dinilab.funcspace.quadrature import dini_weights, log_nodes, weighted_sum
from dinilab.funcspace.seminorms import reduce_table
from dinilab.funcspace.witness import CascadeBump, cascade_bumps
from dinilab.grid import Domain, SampledField

logger = logging.getLogger(__name__)

POINTS_PER_RADIUS = 16
CASCADE_RHO = 0.0625
CASCADE_NODES = 128


@dataclass(frozen=True)
class CascadeLevel:
    """[f]* and ⟨f⟩* of the cascade truncated at one depth."""

    depth: int
    r_lo: float
    rho: float
    cstar: float
    bstar: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def support_gap(bumps: Sequence[CascadeBump]) -> float:
    """Smallest distance between two bump supports; infinite for a single bump."""
    gaps = [math.hypot(a.u - b.u, a.v - b.v) - a.radius - b.radius for k, a in enumerate(bumps) for b in bumps[:k]]
    return min(gaps, default=math.inf)


def bump_field(bump: CascadeBump, points: int = POINTS_PER_RADIUS) -> SampledField:
    """The bump alone on a centred box, ``points`` spacings per radius plus two nodes of zeros."""
    if points < 2:
        raise InvalidArgumentError(f"need at least 2 points per radius, got {points}")
    h = bump.radius / points
    half = points + 2
    domain = Domain(x0=bump.u - half * h, y0=bump.v - half * h, dx=h, dy=h, nx=2 * half + 1, ny=2 * half + 1)
    return SampledField.from_function(domain, bump.function())


def cascade_level(
    depth: int,
    ratio: float = 4.0,
    r1: float = 0.25,
    rho: float = CASCADE_RHO,
    points: int = POINTS_PER_RADIUS,
    nodes: int = CASCADE_NODES,
) -> CascadeLevel:
    """Seminorms of the first ``depth`` bumps, cut off below at twice the finest spacing."""
    bumps = cascade_bumps(depth, ratio, r1)
    gap = support_gap(bumps)
    if rho > 0.5 * gap:
        raise InvalidArgumentError(f"rho={rho} exceeds half the smallest support gap {gap:.4g}")
    fields = [bump_field(bump, points) for bump in bumps]
    r_lo = 2.0 * fields[-1].domain.spacing
    radii = log_nodes(r_lo, rho, nodes)
    omegas = np.max([modulus_global(f, radii).omegas for f in fields], axis=0)
    cstar = float(weighted_sum(dini_weights(radii), omegas))
    bstar = max(reduce_table(f, radii, pointwise_at_all_anchors(f, radii)) for f in fields)
    logger.debug("cascade depth %d: r_lo=%.3g cstar=%.4f bstar=%.4f", depth, r_lo, cstar, bstar)
    return CascadeLevel(depth=depth, r_lo=r_lo, rho=rho, cstar=cstar, bstar=bstar)


def cascade_series(depths: Sequence[int], **params: float) -> list[CascadeLevel]:
    return [cascade_level(depth, **params) for depth in depths]
