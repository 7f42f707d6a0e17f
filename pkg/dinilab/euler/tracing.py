"""Characteristics of a velocity series: RK4 traces and discrete flow maps."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from dinilab.errors import InvalidArgumentError
from dinilab.euler.series import VelocitySeries
from dinilab.grid import BoolArray, Domain, FloatArray

logger = logging.getLogger(__name__)

DEFAULT_INTERVAL = 1.0 / 32.0


class Trace(NamedTuple):
    x: FloatArray
    y: FloatArray
    grazing: BoolArray


def advect_trace(
    v_series: VelocitySeries,
    t: float,
    s: float,
    points: tuple[npt.ArrayLike, npt.ArrayLike],
    steps: int,
) -> Trace:
    """U(s, t, x): integrate dU/ds = v(s, U) from ``t`` to ``s`` with ``steps`` classical RK4 steps.

    Positions are clamped to the closed domain after every step; ``grazing`` marks traces that
    needed it.
    """
    if steps < 1:
        raise InvalidArgumentError(f"RK4 step count must be positive, got {steps}")
    domain = v_series.domain
    x = np.array(points[0], dtype=np.float64)
    y = np.array(points[1], dtype=np.float64)
    grazing = np.zeros(np.shape(x), dtype=bool)
    h = (s - t) / steps
    tau = t
    for _ in range(steps):
        x, y, grazing = _rk4_step(v_series, tau, h, x, y, grazing, domain)
        tau += h
    return Trace(x, y, grazing)


def _rk4_step(
    v_series: VelocitySeries,
    tau: float,
    h: float,
    x: FloatArray,
    y: FloatArray,
    grazing: BoolArray,
    domain: Domain,
) -> tuple[FloatArray, FloatArray, BoolArray]:
    k1x, k1y = v_series(tau, x, y)
    k2x, k2y = v_series(tau + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = v_series(tau + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = v_series(tau + h, x + h * k3x, y + h * k3y)
    nx = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    ny = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    cx, cy, moved = domain.clamp(nx, ny)
    return cx, cy, grazing | moved


@dataclass
class FlowMap:
    """Backward characteristics U(s, t, x) of every node, recorded at the departure times."""

    arrival: float
    departures: list[float]
    positions: list[tuple[FloatArray, FloatArray]] = field(default_factory=list)
    grazing: BoolArray | None = None

    def at(self, s: float) -> tuple[FloatArray, FloatArray]:
        """Positions at departure time ``s``."""
        for departure, position in zip(self.departures, self.positions):
            if math.isclose(departure, s, rel_tol=0.0, abs_tol=1e-12):
                return position
        raise InvalidArgumentError(f"flow map has no departure time {s}")

    @property
    def origin(self) -> tuple[FloatArray, FloatArray]:
        """Positions at the earliest departure time."""
        return self.positions[-1]

    @property
    def grazing_fraction(self) -> float:
        return float(self.grazing.mean()) if self.grazing is not None and self.grazing.size else 0.0


def flow_map(
    v_series: VelocitySeries,
    t: float,
    t0: float = 0.0,
    intervals: int | None = None,
    rk_steps: int = 4,
) -> FlowMap:
    """Trace every node from ``t`` back to ``t0``, recording ``intervals + 1`` departure times."""
    if intervals is None:
        intervals = max(1, math.ceil(abs(t - t0) / DEFAULT_INTERVAL))
    if intervals < 1:
        raise InvalidArgumentError(f"flow map needs at least one interval, got {intervals}")
    X, Y = v_series.domain.mesh()
    departures = [t + (t0 - t) * k / intervals for k in range(intervals + 1)]
    departures[-1] = t0
    fmap = FlowMap(arrival=t, departures=departures, positions=[(X, Y)], grazing=np.zeros(X.shape, dtype=bool))
    x, y = X, Y
    if t == t0:
        return fmap
    for k in range(intervals):
        trace = advect_trace(v_series, departures[k], departures[k + 1], (x, y), rk_steps)
        x, y = trace.x, trace.y
        fmap.positions.append((x, y))
        fmap.grazing |= trace.grazing
    if fmap.grazing.any():
        logger.debug("flow map to t=%.4g: %d grazing traces", t, int(fmap.grazing.sum()))
    return fmap


def jacobian_determinant(x: FloatArray, y: FloatArray, dx: float, dy: float) -> FloatArray:
    """det ∇U at interior nodes by centred differences."""
    xa = (x[2:, 1:-1] - x[:-2, 1:-1]) / (2.0 * dx)
    xb = (x[1:-1, 2:] - x[1:-1, :-2]) / (2.0 * dy)
    ya = (y[2:, 1:-1] - y[:-2, 1:-1]) / (2.0 * dx)
    yb = (y[1:-1, 2:] - y[1:-1, :-2]) / (2.0 * dy)
    return xa * yb - xb * ya
