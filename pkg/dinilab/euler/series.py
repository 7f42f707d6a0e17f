"""Time series of sampled fields, linear in time and spline-interpolated in space."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from dinilab.errors import InvalidArgumentError
from dinilab.grid import Domain, FloatArray, GridInterpolant, SampledField, VectorField

Forcing = Callable[[float, FloatArray, FloatArray], FloatArray]


def _check_times(times: Sequence[float], count: int) -> FloatArray:
    t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or len(t) == 0 or len(t) != count:
        raise InvalidArgumentError("a series needs one time per field and at least one field")
    if np.any(np.diff(t) <= 0):
        raise InvalidArgumentError("series times must be strictly increasing")
    return t


def time_weights(times: FloatArray, t: float) -> tuple[int, float]:
    """Index ``k`` and weight ``w`` with value(t) = (1 - w) value[k] + w value[k + 1]."""
    if len(times) == 1:
        return 0, 0.0
    k = int(np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(times) - 2))
    w = float(np.clip((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0))
    return k, w


class VelocitySeries:
    """Staggered velocities at increasing times."""

    def __init__(self, times: Sequence[float], velocities: Sequence[VectorField], order: int = 1):
        self.times = _check_times(times, len(velocities))
        self.velocities = list(velocities)
        self.domain: Domain = self.velocities[0].domain
        self.order = order
        self._interpolants = [v.interpolants(order) for v in self.velocities]

    @classmethod
    def steady(cls, velocity: VectorField, order: int = 1) -> VelocitySeries:
        return cls([0.0], [velocity], order)

    def __call__(self, t: float, x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        k, w = time_weights(self.times, t)
        u1, u2 = self._interpolants[k][0](x, y), self._interpolants[k][1](x, y)
        if w > 0.0:
            n1, n2 = self._interpolants[k + 1]
            u1 = (1.0 - w) * u1 + w * n1(x, y)
            u2 = (1.0 - w) * u2 + w * n2(x, y)
        return u1, u2


class FieldSeries:
    """Scalar fields at increasing times; callable as a forcing φ(s, x, y)."""

    def __init__(self, times: Sequence[float], fields: Sequence[SampledField], order: int = 1):
        self.times = _check_times(times, len(fields))
        self.fields = list(fields)
        self.order = order
        self._interpolants: list[GridInterpolant] = [f.interpolant(order) for f in self.fields]

    @classmethod
    def steady(cls, field: SampledField, order: int = 1) -> FieldSeries:
        return cls([0.0], [field], order)

    def __call__(self, t: float, x: FloatArray, y: FloatArray) -> FloatArray:
        k, w = time_weights(self.times, t)
        value = self._interpolants[k](x, y)
        if w > 0.0:
            value = (1.0 - w) * value + w * self._interpolants[k + 1](x, y)
        return value


def forcing_sup(phi: Forcing | None, domain: Domain, t: float) -> float:
    """‖φ(t)‖ over the included nodes."""
    if phi is None:
        return 0.0
    X, Y = domain.mesh()
    return float(np.abs(np.broadcast_to(phi(t, X, Y), X.shape)[domain.included]).max())


def forcing_field(phi: Forcing, domain: Domain, t: float) -> SampledField:
    X, Y = domain.mesh()
    return SampledField(domain, np.broadcast_to(phi(t, X, Y), X.shape))


def trapezoid(times: Sequence[float], values: Sequence[float]) -> float:
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if len(t) < 2:
        return 0.0
    return float(np.sum(0.5 * np.diff(t) * (v[1:] + v[:-1])))
