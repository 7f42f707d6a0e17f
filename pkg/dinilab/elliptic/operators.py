"""Finite-difference operators on the node lattice and its staggered edges.

Forward differences take the stream function to the edges (rot) and backward differences bring
edge data back to the nodes (curl), so div∘rot vanishes and curl∘rot is the 5-point -Δ.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from dinilab.funcspace.modulus import offset_slices
from dinilab.grid import Domain, FloatArray, SampledField, VectorField

# max(|a|, |b|) <= 2: axes, diagonals and knight moves
NEIGHBOR_OFFSETS = tuple((a, b) for a in range(0, 3) for b in range(-2, 3) if a > 0 or b > 0)


def laplacian_5pt(f: SampledField) -> FloatArray:
    """5-point Laplacian at interior nodes, shape ``(nx - 2, ny - 2)``."""
    v, d = f.values, f.domain
    return (v[2:, 1:-1] - 2.0 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / d.dx**2 + (
        v[1:-1, 2:] - 2.0 * v[1:-1, 1:-1] + v[1:-1, :-2]
    ) / d.dy**2


def rot(psi: SampledField) -> VectorField:
    """v = (∂₂ψ, -∂₁ψ) by forward differences onto the edges."""
    d = psi.domain
    v = psi.values
    return VectorField(d, np.diff(v, axis=1) / d.dy, -np.diff(v, axis=0) / d.dx)


def curl(v: VectorField) -> SampledField:
    """∂₁v₂ - ∂₂v₁ at the nodes; boundary nodes copy their inner neighbour."""
    d = v.domain
    interior = np.diff(v.v2[:, 1:-1], axis=0) / d.dx - np.diff(v.v1[1:-1, :], axis=1) / d.dy
    return SampledField(d, np.pad(interior, 1, mode="edge"))


def divergence(v: VectorField) -> FloatArray:
    """Cell-centred divergence."""
    return v.divergence()


def normal_trace(v: VectorField) -> float:
    """max |v·n| over the wall edges."""
    return float(max(np.abs(v.v1[[0, -1], :]).max(), np.abs(v.v2[:, [0, -1]]).max()))


def gradient_nodes(f: SampledField) -> tuple[FloatArray, FloatArray]:
    """Second-order accurate gradient at every node."""
    d = f.domain
    return np.gradient(f.values, d.dx, axis=0, edge_order=2), np.gradient(f.values, d.dy, axis=1, edge_order=2)


def _second_difference(values: FloatArray, h: float, axis: int) -> FloatArray:
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h**2
    if len(v) >= 4:
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h**2
        out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h**2
    else:
        out[0], out[-1] = out[1], out[-2]
    return np.moveaxis(out, 0, axis)


def second_derivatives(f: SampledField) -> tuple[FloatArray, FloatArray, FloatArray]:
    """(f_xx, f_xy, f_yy) at every node; compact stencils inside, one-sided at the edges."""
    d = f.domain
    fxx = _second_difference(f.values, d.dx, 0)
    fyy = _second_difference(f.values, d.dy, 1)
    fx = np.gradient(f.values, d.dx, axis=0, edge_order=2)
    fxy = np.gradient(fx, d.dy, axis=1, edge_order=2)
    return fxx, fxy, fyy


def hessian_sup(f: SampledField) -> float:
    """‖D²f‖_∞ as the largest second-derivative entry."""
    return float(max(np.abs(part).max() for part in second_derivatives(f)))


def c2_norm(psi: SampledField) -> float:
    """Largest sup over derivative orders 0, 1 and 2."""
    gx, gy = gradient_nodes(psi)
    first = float(max(np.abs(gx).max(), np.abs(gy).max()))
    return max(psi.sup, first, hessian_sup(psi))


def difference_quotient(
    values: FloatArray,
    dx: float,
    dy: float,
    offsets: Iterable[tuple[int, int]],
    power: float = 1.0,
) -> float:
    """max |g(p + (a, b)) - g(p)| / |(a dx, b dy)|^power over the given offsets."""
    nx, ny = values.shape
    best = 0.0
    for a, b in offsets:
        if abs(a) >= nx or abs(b) >= ny:
            continue
        sx, tx = offset_slices(nx, a)
        sy, ty = offset_slices(ny, b)
        diff = np.abs(values[tx, ty] - values[sx, sy])
        if diff.size:
            best = max(best, float(diff.max()) / float(np.hypot(a * dx, b * dy)) ** power)
    return best


def offsets_up_to(domain: Domain, max_radius: float) -> list[tuple[int, int]]:
    """Half-plane offsets no longer than ``max_radius``."""
    amax = int(max_radius / domain.dx)
    bmax = int(max_radius / domain.dy)
    return [
        (a, b)
        for a in range(0, amax + 1)
        for b in range(-bmax, bmax + 1)
        if (a > 0 or b > 0) and np.hypot(a * domain.dx, b * domain.dy) <= max_radius
    ]


def lipschitz_seminorm(g: SampledField) -> float:
    """Largest difference quotient over neighbour pairs up to two steps apart, diagonals included."""
    return difference_quotient(g.values, g.domain.dx, g.domain.dy, NEIGHBOR_OFFSETS)


def velocity_gradients(v: VectorField) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """(∂₁v₁, ∂₂v₁, ∂₁v₂, ∂₂v₂) by differences along each staggered lattice."""
    d = v.domain
    return (
        np.diff(v.v1, axis=0) / d.dx,
        np.diff(v.v1, axis=1) / d.dy,
        np.diff(v.v2, axis=0) / d.dx,
        np.diff(v.v2, axis=1) / d.dy,
    )


def gradient_sup(v: VectorField) -> float:
    """‖∇v‖_∞ over all four velocity-gradient entries."""
    return float(max(np.abs(part).max() for part in velocity_gradients(v)))
