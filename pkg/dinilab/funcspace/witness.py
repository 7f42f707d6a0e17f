"""Witness fields that separate the Hölder, Hölder-log, Dini and continuous classes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping

import numpy as np

from dinilab.errors import InvalidArgumentError
from dinilab.grid import Domain, FloatArray, PointFunction, SampledField

WitnessBuilder = Callable[[Domain, dict[str, Any]], PointFunction]

WITNESS_REGISTRY: dict[str, tuple[WitnessBuilder, dict[str, Any]]] = {}

# Unit-box placement of the cascade bumps; with r1 = 0.25 the supports stay disjoint for ratio >= 1.4.
CASCADE_CENTERS = (
    (0.3, 0.3),
    (0.75, 0.75),
    (0.75, 0.25),
    (0.25, 0.75),
    (0.5, 0.9),
    (0.9, 0.5),
    (0.55, 0.6),
    (0.1, 0.9),
)
MAX_CASCADE_DEPTH = len(CASCADE_CENTERS)


def register_witness(name: str, **defaults: Any) -> Callable[[WitnessBuilder], WitnessBuilder]:
    """Decorator to register a witness builder with its default parameters."""

    def decorator(builder: WitnessBuilder) -> WitnessBuilder:
        WITNESS_REGISTRY[name] = (builder, defaults)
        return builder

    return decorator


def _center(domain: Domain, params: dict[str, Any]) -> tuple[float, float]:
    center = params.get("center")
    if center is None:
        return 0.5 * (domain.x0 + domain.x1), 0.5 * (domain.y0 + domain.y1)
    return float(center[0]), float(center[1])


def _radius(domain: Domain, params: dict[str, Any]) -> Callable[[FloatArray, FloatArray], FloatArray]:
    cx, cy = _center(domain, params)
    return lambda x, y: np.hypot(x - cx, y - cy)


def _taper(s: FloatArray) -> FloatArray:
    """cos² bump profile on [0, 1), zero beyond."""
    return np.where(s < 1.0, np.cos(0.5 * np.pi * np.minimum(s, 1.0)) ** 2, 0.0)


@dataclass(frozen=True)
class CascadeBump:
    """One cos² bump of the cascade, in unit-box coordinates."""

    u: float
    v: float
    radius: float
    amplitude: float

    def function(self) -> PointFunction:
        return lambda x, y: self.amplitude * _taper(np.hypot(x - self.u, y - self.v) / self.radius)


def cascade_bumps(depth: int, ratio: float = 4.0, r1: float = 0.25) -> list[CascadeBump]:
    """Bump k (1-based) sits at CASCADE_CENTERS[k-1] with radius r1·ratio^{1-k} and height 1/k.

    Raises InvalidArgumentError when a support leaves the unit box or two supports overlap.
    """
    if not 1 <= depth <= MAX_CASCADE_DEPTH:
        raise InvalidArgumentError(f"bump_cascade depth must lie in [1, {MAX_CASCADE_DEPTH}], got {depth}")
    if ratio <= 1.0 or r1 <= 0.0:
        raise InvalidArgumentError(f"bump_cascade needs ratio > 1 and r1 > 0, got ratio={ratio}, r1={r1}")
    bumps = [
        CascadeBump(u, v, r1 * ratio ** (-k), 1.0 / (k + 1)) for k, (u, v) in enumerate(CASCADE_CENTERS[:depth])
    ]
    for k, a in enumerate(bumps):
        if min(a.u, a.v) - a.radius < 0.0 or max(a.u, a.v) + a.radius > 1.0:
            raise InvalidArgumentError(f"bump_cascade bump {k + 1} leaves the domain")
        for j, b in enumerate(bumps[:k]):
            if math.hypot(a.u - b.u, a.v - b.v) < a.radius + b.radius:
                raise InvalidArgumentError(f"bump_cascade bumps {j + 1} and {k + 1} overlap; increase ratio")
    return bumps


@register_witness("constant", value=1.0)
def _constant(domain: Domain, params: dict[str, Any]) -> PointFunction:
    value = float(params["value"])
    return lambda x, y: np.full(np.shape(x), value)


@register_witness("linear", a=1.0, b=0.0, c=0.0)
def _linear(domain: Domain, params: dict[str, Any]) -> PointFunction:
    a, b, c = float(params["a"]), float(params["b"]), float(params["c"])
    return lambda x, y: a * x + b * y + c


@register_witness("holder", lam=0.5, center=None, amplitude=1.0)
def _holder(domain: Domain, params: dict[str, Any]) -> PointFunction:
    lam = float(params["lam"])
    if not 0 < lam <= 1:
        raise InvalidArgumentError(f"holder witness needs lam in (0, 1], got {lam}")
    amplitude = float(params["amplitude"])
    radius = _radius(domain, params)
    return lambda x, y: amplitude * radius(x, y) ** lam


@register_witness("holderlog", alpha=2.0, center=None)
def _holderlog(domain: Domain, params: dict[str, Any]) -> PointFunction:
    """(-log r)^{-α} inside r < 1/e, 1 outside, 0 at the centre."""
    alpha = float(params["alpha"])
    if alpha <= 0:
        raise InvalidArgumentError(f"holderlog witness needs alpha > 0, got {alpha}")
    radius = _radius(domain, params)
    cutoff = math.exp(-1.0)

    def func(x: FloatArray, y: FloatArray) -> FloatArray:
        r = radius(x, y)
        inside = (r > 0) & (r < cutoff)
        safe = np.where(inside, r, cutoff)
        return np.where(r == 0, 0.0, np.where(inside, (-np.log(safe)) ** (-alpha), 1.0))

    return func


@register_witness("log_reciprocal", power=1.0, quadrupole=False, support=None, center=None)
def _log_reciprocal(domain: Domain, params: dict[str, Any]) -> PointFunction:
    """log(e·R/r)^{-power}: continuous, not Dini for power <= 1.

    ``quadrupole`` multiplies by cos 2φ about the centre; ``support`` tapers the field to zero at
    that radius.
    """
    power = float(params["power"])
    if power <= 0:
        raise InvalidArgumentError(f"log_reciprocal witness needs power > 0, got {power}")
    support = params["support"]
    quadrupole = bool(params["quadrupole"])
    cx, cy = _center(domain, params)
    scale = math.e * domain.diameter

    def func(x: FloatArray, y: FloatArray) -> FloatArray:
        dx, dy = x - cx, y - cy
        r = np.hypot(dx, dy)
        safe = np.where(r > 0, r, 1.0)
        value = np.where(r > 0, np.log(scale / safe) ** (-power), 0.0)
        if quadrupole:
            value = value * np.where(r > 0, (dx * dx - dy * dy) / (safe * safe), 0.0)
        if support is not None:
            value = value * _taper(r / float(support))
        return value

    return func


@register_witness("bump_cascade", depth=3, ratio=4.0, r1=0.25)
def _bump_cascade(domain: Domain, params: dict[str, Any]) -> PointFunction:
    """Disjoint cos² bumps: bump k has radius r1·ratio^{1-k} (relative to the box side) and height 1/k."""
    unit = cascade_bumps(int(params["depth"]), float(params["ratio"]), float(params["r1"]))
    width, height = domain.x1 - domain.x0, domain.y1 - domain.y0
    side = min(width, height)
    bumps = [(domain.x0 + b.u * width, domain.y0 + b.v * height, b.radius * side, b.amplitude) for b in unit]

    def func(x: FloatArray, y: FloatArray) -> FloatArray:
        total = np.zeros(np.broadcast(x, y).shape)
        for bx, by, radius, amplitude in bumps:
            total = total + amplitude * _taper(np.hypot(x - bx, y - by) / radius)
        return total

    return func


@register_witness("eigen_sine", amplitude=1.0, modes=(1, 1))
def _eigen_sine(domain: Domain, params: dict[str, Any]) -> PointFunction:
    amplitude = float(params["amplitude"])
    m, n = (int(k) for k in params["modes"])
    width, height = domain.x1 - domain.x0, domain.y1 - domain.y0
    return lambda x, y: amplitude * np.sin(m * np.pi * (x - domain.x0) / width) * np.sin(n * np.pi * (y - domain.y0) / height)


@register_witness("cone", center=None)
def _cone(domain: Domain, params: dict[str, Any]) -> PointFunction:
    return _radius(domain, params)


@register_witness("gaussian", width=0.1, amplitude=1.0, center=None)
def _gaussian(domain: Domain, params: dict[str, Any]) -> PointFunction:
    width, amplitude = float(params["width"]), float(params["amplitude"])
    if width <= 0:
        raise InvalidArgumentError(f"gaussian witness needs width > 0, got {width}")
    radius = _radius(domain, params)
    return lambda x, y: amplitude * np.exp(-((radius(x, y) / width) ** 2))


@register_witness("random_smooth", seed=0, modes=4)
def _random_smooth(domain: Domain, params: dict[str, Any]) -> PointFunction:
    """Random sine series with coefficients decaying like 1/(m² + n²); vanishes on the box edges."""
    modes = int(params["modes"])
    rng = np.random.default_rng(int(params["seed"]))
    coeffs = rng.standard_normal((modes, modes))
    k = np.arange(1, modes + 1)
    coeffs /= k[:, None] ** 2 + k[None, :] ** 2
    width, height = domain.x1 - domain.x0, domain.y1 - domain.y0

    def func(x: FloatArray, y: FloatArray) -> FloatArray:
        sx = np.sin(np.multiply.outer(np.pi * (x - domain.x0) / width, k))
        sy = np.sin(np.multiply.outer(np.pi * (y - domain.y0) / height, k))
        return np.einsum("...m,mn,...n->...", sx, coeffs, sy)

    return func


def witness_params(kind: str, params: Mapping[str, Any] | None = None) -> dict[str, Any]:
    """Defaults of ``kind`` overlaid with ``params``; unknown names are rejected."""
    if kind not in WITNESS_REGISTRY:
        raise InvalidArgumentError(f"unknown witness kind {kind!r}, expected one of {sorted(WITNESS_REGISTRY)}")
    _, defaults = WITNESS_REGISTRY[kind]
    given = dict(params or {})
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise InvalidArgumentError(f"unknown parameter(s) for witness {kind!r}: {', '.join(unknown)}")
    return {**defaults, **given}


def witness_function(kind: str, params: Mapping[str, Any] | None, domain: Domain) -> PointFunction:
    """Analytic callable of a witness, for sampling on nodes or staggered edges alike."""
    merged = witness_params(kind, params)
    builder, _ = WITNESS_REGISTRY[kind]
    return builder(domain, merged)


def make_witness(kind: str, params: Mapping[str, Any] | None = None, domain: Domain | None = None) -> SampledField:
    """Sample a witness on ``domain`` (the 129-point unit square by default)."""
    domain = domain if domain is not None else Domain.unit_square(129)
    return SampledField.from_function(domain, witness_function(kind, params, domain))
