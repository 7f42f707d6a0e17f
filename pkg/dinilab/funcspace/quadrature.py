"""Log-spaced trapezoid quadrature for Dini integrals of ω(r)/r."""

from __future__ import annotations

import math

import numpy as np

from dinilab.errors import InvalidArgumentError
from dinilab.grid import FloatArray

DEFAULT_NODES = 256


def log_nodes(r_lo: float, r_hi: float, count: int = DEFAULT_NODES) -> FloatArray:
    """``count`` geometrically spaced radii from ``r_lo`` to ``r_hi`` inclusive."""
    if r_lo <= 0:
        raise InvalidArgumentError(f"lower cutoff must be positive, got r_lo={r_lo}")
    if r_hi <= r_lo:
        raise InvalidArgumentError(f"upper cutoff {r_hi} must exceed lower cutoff {r_lo}")
    if count < 2:
        raise InvalidArgumentError(f"quadrature needs at least 2 nodes, got {count}")
    step = math.log(r_hi / r_lo) / (count - 1)
    nodes = r_lo * np.exp(step * np.arange(count))
    nodes[0] = r_lo
    nodes[-1] = r_hi
    return nodes


def dini_weights(nodes: FloatArray) -> FloatArray:
    """Weights ``w`` with ``sum(w * omega)`` equal to the trapezoid rule for ∫ omega(r)/r dr."""
    h = np.diff(nodes)
    w = np.zeros_like(nodes)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w / nodes


def weighted_sum(weights: FloatArray, omegas: FloatArray) -> FloatArray | float:
    """Accumulate ``weights[k] * omegas[k]`` over the first axis in fixed order.

    The sequential order makes a 1-D profile and one column of a stacked array reduce to the same
    bits.
    """
    acc = np.zeros(np.shape(omegas)[1:])
    for k in range(len(weights)):
        acc = acc + weights[k] * omegas[k]
    return float(acc) if acc.ndim == 0 else acc


def nested_cutoff(r_lo: float, rho: float, count: int, larger_count: int) -> float:
    """Cutoff whose ``larger_count`` log nodes extend the ``count`` nodes of [r_lo, rho]."""
    if larger_count < count:
        raise InvalidArgumentError("nested node count must not shrink")
    step = math.log(rho / r_lo) / (count - 1)
    return r_lo * math.exp(step * (larger_count - 1))


def nested_count(r_lo: float, rho: float, count: int, target_rho: float) -> int:
    """Node count on [r_lo, ~target_rho] that nests the ``count`` nodes of [r_lo, rho]."""
    step = math.log(rho / r_lo) / (count - 1)
    return max(count, 1 + round(math.log(target_rho / r_lo) / step))


def tail_excess(nodes: FloatArray, start: int) -> float:
    """Trapezoid of 1/r over ``nodes[start:]`` minus its exact value; bounds the rescaling quadrature error."""
    tail = nodes[start:]
    if len(tail) < 2:
        return 0.0
    trap = float(np.sum(0.5 * np.diff(tail) * (1.0 / tail[1:] + 1.0 / tail[:-1])))
    return max(trap - math.log(tail[-1] / tail[0]), 0.0)
