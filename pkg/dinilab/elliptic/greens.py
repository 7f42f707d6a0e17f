"""Dirichlet Green's function of the unit disk and its sampled checks.

The decay checks use the planar analogs |G| ≲ 1 + |log|x - y|| and |∇ₓG| ≲ 1/|x - y|; the fitted
constants are reported, not assumed, and every check is labelled as an analog.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt
from numpy.polynomial.legendre import leggauss

from dinilab.checks import EstimateCheck
from dinilab.errors import InvalidArgumentError, SingularityError
from dinilab.grid import FloatArray, PointFunction

logger = logging.getLogger(__name__)

_EDGE = 1e-12


def _points(x: npt.ArrayLike, y: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    px = np.asarray(x, dtype=np.float64)
    py = np.asarray(y, dtype=np.float64)
    if px.shape[-1:] != (2,) or py.shape[-1:] != (2,):
        raise InvalidArgumentError("points must have a trailing axis of length 2")
    if np.any(np.hypot(px[..., 0], px[..., 1]) > 1.0 + _EDGE) or np.any(np.hypot(py[..., 0], py[..., 1]) > 1.0 + _EDGE):
        raise InvalidArgumentError("points must lie in the closed unit disk")
    if np.any(np.all(px == py, axis=-1)):
        raise SingularityError("Green's function is singular at x = y")
    return px, py


def greens_disk(x: npt.ArrayLike, y: npt.ArrayLike) -> FloatArray | float:
    """G(x, y) = (1/4π) log((1 - 2x·y + |x|²|y|²) / |x - y|²)."""
    px, py = _points(x, y)
    dot = np.sum(px * py, axis=-1)
    image = 1.0 - 2.0 * dot + np.sum(px * px, axis=-1) * np.sum(py * py, axis=-1)
    dist2 = np.sum((px - py) ** 2, axis=-1)
    value = np.log(image / dist2) / (4.0 * np.pi)
    return float(value) if np.ndim(value) == 0 else value


def greens_disk_gradient(x: npt.ArrayLike, y: npt.ArrayLike) -> FloatArray:
    """∇ₓG(x, y), trailing axis of length 2."""
    px, py = _points(x, y)
    xx = np.sum(px * px, axis=-1, keepdims=True)
    yy = np.sum(py * py, axis=-1, keepdims=True)
    image = 1.0 - 2.0 * np.sum(px * py, axis=-1, keepdims=True) + xx * yy
    diff = px - py
    dist2 = np.sum(diff * diff, axis=-1, keepdims=True)
    return ((-2.0 * py + 2.0 * yy * px) / image - 2.0 * diff / dist2) / (4.0 * np.pi)


def greens_potential(theta: PointFunction, x: tuple[float, float], radial: int = 96, angular: int = 192) -> float:
    """∫ G(x, y) θ(y) dy over the disk by Gauss-Legendre in r and the trapezoid rule in angle."""
    nodes, weights = leggauss(radial)
    r = 0.5 * (nodes + 1.0)
    wr = 0.5 * weights * r
    phi = 2.0 * np.pi * np.arange(angular) / angular
    R, PHI = np.meshgrid(r, phi, indexing="ij")
    Y = np.stack([R * np.cos(PHI), R * np.sin(PHI)], axis=-1)
    px = np.broadcast_to(np.asarray(x, dtype=np.float64), Y.shape)
    keep = ~np.all(px == Y, axis=-1)
    kernel = np.zeros(R.shape)
    kernel[keep] = np.asarray(greens_disk(px[keep], Y[keep]))
    integrand = kernel * theta(Y[..., 0], Y[..., 1])
    return float(np.sum(wr[:, None] * integrand) * (2.0 * np.pi / angular))


def sample_disk_pairs(count: int, seed: int = 0, radius: float = 0.95) -> tuple[FloatArray, FloatArray]:
    """``count`` uniformly distributed pairs of distinct points in the disk of the given radius."""
    rng = np.random.default_rng(seed)

    def draw() -> FloatArray:
        r = radius * np.sqrt(rng.random(count))
        phi = 2.0 * np.pi * rng.random(count)
        return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)

    return draw(), draw()


def greens_decay_checks(count: int = 1000, seed: int = 0, ceiling: float = 1.0) -> list[EstimateCheck]:
    """Boundary vanishing, symmetry and fitted decay constants on random pairs."""
    x, y = sample_disk_pairs(count, seed)
    dist = np.hypot(*(x - y).T)
    values = np.asarray(greens_disk(x, y))
    swapped = np.asarray(greens_disk(y, x))
    asymmetry = float(np.abs(values - swapped).max())

    phi = 2.0 * np.pi * np.random.default_rng(seed + 1).random(count)
    boundary = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    on_boundary = float(np.abs(np.asarray(greens_disk(boundary, y))).max())

    value_ratio = np.abs(values) / (1.0 + np.abs(np.log(dist)))
    grad = np.hypot(*greens_disk_gradient(x, y).T)
    grad_ratio = grad * dist
    k_value, k_grad = int(np.argmax(value_ratio)), int(np.argmax(grad_ratio))
    logger.info("Green's decay constants (planar analogs): %.4g, %.4g", value_ratio[k_value], grad_ratio[k_grad])
    return [
        EstimateCheck.inequality("greens_symmetry", asymmetry, 1e-12, note="exact symmetry"),
        EstimateCheck.inequality("greens_boundary", on_boundary, 1e-12, note="Dirichlet condition"),
        EstimateCheck.ratio(
            "greens_value_decay",
            float(np.abs(values[k_value])),
            float(1.0 + abs(math.log(dist[k_value]))),
            ceiling,
            note="analog: |G| <= C(1 + |log|x-y||)",
        ),
        EstimateCheck.ratio(
            "greens_gradient_decay",
            float(grad[k_grad]),
            float(1.0 / dist[k_grad]),
            ceiling,
            note="analog: |grad_x G| <= C/|x-y|",
        ),
    ]
