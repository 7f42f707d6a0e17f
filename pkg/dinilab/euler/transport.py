"""Vorticity transport along backward characteristics."""

from __future__ import annotations

import numpy as np

from dinilab.euler.series import Forcing, VelocitySeries
from dinilab.euler.tracing import FlowMap, flow_map
from dinilab.grid import SampledField


def transport_along(zeta_start: SampledField, phi: Forcing | None, fmap: FlowMap, order: int = 1) -> SampledField:
    """ζ(t, x) = ζ_start(U(t0, t, x)) + ∫ φ(s, U(s, t, x)) ds, the integral by the trapezoid rule
    over the recorded departure times."""
    domain = zeta_start.domain
    ox, oy = fmap.origin
    values = zeta_start.interpolant(order)(ox, oy)
    if phi is not None and len(fmap.departures) > 1:
        samples = [np.broadcast_to(phi(s, x, y), x.shape) for s, (x, y) in zip(fmap.departures, fmap.positions)]
        for k in range(len(samples) - 1):
            values = values + 0.5 * (fmap.departures[k] - fmap.departures[k + 1]) * (samples[k] + samples[k + 1])
    return SampledField(domain, values)


def transport_vorticity(
    zeta0: SampledField,
    phi: Forcing | None,
    v_series: VelocitySeries,
    t: float,
    t0: float = 0.0,
    intervals: int | None = None,
    rk_steps: int = 4,
    order: int = 1,
) -> SampledField:
    """Vorticity at time ``t`` carried from ``zeta0`` at ``t0`` by ``v_series`` and forced by ``phi``."""
    return transport_along(zeta0, phi, flow_map(v_series, t, t0, intervals, rk_steps), order)
