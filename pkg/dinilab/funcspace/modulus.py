"""Moduli of continuity of sampled fields.

Pairs of grid points are grouped by their integer index offset ``(a, b)``: every pair sharing an
offset has the same length, so one array slice per offset replaces a loop over pairs. Offsets are
visited in order of increasing length (ties broken by ``a`` then ``b``) and the running maximum
turns per-offset maxima into ω(r) for every r at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import numpy.typing as npt

from dinilab.errors import InvalidArgumentError
from dinilab.grid import BoolArray, Domain, FloatArray, SampledField

logger = logging.getLogger(__name__)

KINDS = ("global", "pointwise", "sphere")
ALIGNMENTS = ("center", "inner")


@dataclass(frozen=True, eq=False)
class ModulusProfile:
    """Table r ↦ ω(r) of a modulus of continuity."""

    radii: FloatArray
    omegas: FloatArray
    kind: str
    anchor: tuple[float, float] | None = None
    clamped: bool = False
    empty_shells: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        radii = np.asarray(self.radii, dtype=np.float64)
        omegas = np.asarray(self.omegas, dtype=np.float64)
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown modulus kind {self.kind!r}")
        if radii.ndim != 1 or radii.shape != omegas.shape:
            raise InvalidArgumentError("radii and omegas must be 1-D arrays of equal length")
        if len(radii) == 0:
            raise InvalidArgumentError("profile needs at least one radius")
        if radii[0] <= 0 or np.any(np.diff(radii) <= 0):
            raise InvalidArgumentError("radii must be positive and strictly increasing")
        if np.any(omegas < 0):
            raise InvalidArgumentError("omegas must be nonnegative")
        if self.kind != "sphere" and np.any(np.diff(omegas) < 0):
            raise InvalidArgumentError(f"{self.kind} profile must be nondecreasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "omegas", omegas)

    def at(self, r: npt.ArrayLike) -> FloatArray:
        """Linear interpolation of ω between the tabulated radii."""
        return np.interp(r, self.radii, self.omegas)


def _check_radii(radii: npt.ArrayLike) -> FloatArray:
    r = np.asarray(radii, dtype=np.float64)
    if r.ndim != 1 or len(r) == 0:
        raise InvalidArgumentError("radii list must be non-empty")
    if r[0] <= 0 or np.any(np.diff(r) <= 0):
        raise InvalidArgumentError("radii must be positive and strictly increasing")
    return r


def offsets_within(domain: Domain, max_radius: float, half: bool = True) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Index offsets ``(a, b)`` with 0 < |(a dx, b dy)| <= max_radius, sorted by length.

    With ``half=True`` only one offset of each ``±(a, b)`` pair is returned.
    """
    amax = min(domain.nx - 1, int(np.floor(max_radius / domain.dx)) + 1)
    bmax = min(domain.ny - 1, int(np.floor(max_radius / domain.dy)) + 1)
    A, B = np.meshgrid(np.arange(-amax, amax + 1), np.arange(-bmax, bmax + 1), indexing="ij")
    A, B = A.ravel(), B.ravel()
    d = domain.pair_distance(np.abs(A), np.abs(B))
    keep = (d <= max_radius) & ((A != 0) | (B != 0))
    if half:
        keep &= (A > 0) | ((A == 0) & (B > 0))
    A, B, d = A[keep], B[keep], d[keep]
    order = np.lexsort((B, A, d))
    return A[order], B[order], d[order]


def offset_slices(n: int, shift: int) -> tuple[slice, slice]:
    """Source and target slices pairing index i with i + shift."""
    return slice(max(0, -shift), n - max(0, shift)), slice(max(0, shift), n - max(0, -shift))


def offset_differences(
    values: FloatArray, included: BoolArray, a: int, b: int
) -> tuple[FloatArray, tuple[slice, slice], tuple[slice, slice]]:
    """|f(p + (a, b)) - f(p)| for every valid p, zero where either end is masked out."""
    nx, ny = values.shape
    sx, tx = offset_slices(nx, a)
    sy, ty = offset_slices(ny, b)
    diff = np.abs(values[tx, ty] - values[sx, sy])
    valid = included[tx, ty] & included[sx, sy]
    return np.where(valid, diff, 0.0), (sx, sy), (tx, ty)


def iter_offset_maxima(f: SampledField, max_radius: float) -> Iterator[tuple[int, int, float, float]]:
    """Yield ``(a, b, length, max difference)`` for each half-plane offset within ``max_radius``."""
    A, B, D = offsets_within(f.domain, max_radius)
    included = f.domain.included
    for a, b, d in zip(A.tolist(), B.tolist(), D.tolist()):
        diff, _, _ = offset_differences(f.values, included, a, b)
        yield a, b, d, float(diff.max()) if diff.size else 0.0


def offset_table(f: SampledField, max_radius: float) -> tuple[FloatArray, FloatArray]:
    """Offset lengths (ascending) and the per-offset maximum |f(x) - f(y)|."""
    rows = list(iter_offset_maxima(f, max_radius))
    if not rows:
        return np.zeros(0), np.zeros(0)
    table = np.asarray([(d, m) for _, _, d, m in rows])
    return table[:, 0], table[:, 1]


def _running_max_at(lengths: FloatArray, maxima: FloatArray, radii: FloatArray) -> FloatArray:
    if len(lengths) == 0:
        return np.zeros_like(radii)
    running = np.maximum.accumulate(maxima)
    k = np.searchsorted(lengths, radii, side="right") - 1
    return np.where(k >= 0, running[np.maximum(k, 0)], 0.0)


def modulus_global(f: SampledField, radii: npt.ArrayLike) -> ModulusProfile:
    """ω_f(r): max |f(x) - f(y)| over included pairs with |x - y| <= r."""
    r = _check_radii(radii)
    diameter = f.domain.diameter
    clamped = bool(r[-1] > diameter)
    if clamped:
        logger.debug("radii beyond the diameter %.4g are clamped", diameter)
    lengths, maxima = offset_table(f, min(r[-1], diameter))
    return ModulusProfile(radii=r, omegas=_running_max_at(lengths, maxima, r), kind="global", clamped=clamped)


def _anchor_table(f: SampledField, x0: tuple[float, float]) -> tuple[FloatArray, FloatArray]:
    i0, j0 = f.domain.index_of(x0)
    I, J = np.meshgrid(np.arange(f.domain.nx), np.arange(f.domain.ny), indexing="ij")
    included = f.domain.included
    d = f.domain.pair_distance(np.abs(I - i0), np.abs(J - j0))[included]
    diff = np.abs(f.values[included] - f.values[i0, j0])
    order = np.argsort(d, kind="stable")
    return d[order], diff[order]


def modulus_pointwise(f: SampledField, x0: tuple[float, float], radii: npt.ArrayLike) -> ModulusProfile:
    """ω_f(x0; r): max |f(x0) - f(y)| over included y with |y - x0| <= r."""
    r = _check_radii(radii)
    lengths, diffs = _anchor_table(f, x0)
    return ModulusProfile(
        radii=r,
        omegas=_running_max_at(lengths, diffs, r),
        kind="pointwise",
        anchor=x0,
        clamped=bool(r[-1] > f.domain.diameter),
    )


def shell_bounds(radii: FloatArray, width: float, align: str) -> tuple[FloatArray, FloatArray]:
    """Inner and outer radius of the discrete sphere at each node."""
    if align == "center":
        return radii - 0.5 * width, radii + 0.5 * width
    if align == "inner":
        return radii - width, radii
    raise InvalidArgumentError(f"unknown shell alignment {align!r}, expected one of {ALIGNMENTS}")


def _check_width(domain: Domain, width: float | None) -> float:
    w = domain.spacing if width is None else float(width)
    if w < domain.spacing * (1.0 - 1e-12):
        raise InvalidArgumentError(f"shell width {w} is narrower than the grid spacing {domain.spacing}")
    return w


def modulus_sphere(
    f: SampledField,
    x0: tuple[float, float],
    radii: npt.ArrayLike,
    shell_width: float | None = None,
    align: str = "center",
) -> ModulusProfile:
    """Sup of |f(y) - f(x0)| over the annulus of width ``shell_width`` about each radius."""
    r = _check_radii(radii)
    w = _check_width(f.domain, shell_width)
    lo, hi = shell_bounds(r, w, align)
    lengths, diffs = _anchor_table(f, x0)
    first = np.searchsorted(lengths, lo, side="left")
    last = np.searchsorted(lengths, hi, side="right")
    omegas = np.zeros_like(r)
    empty = []
    for k in range(len(r)):
        if last[k] > first[k]:
            omegas[k] = diffs[first[k] : last[k]].max()
        else:
            empty.append(k)
    return ModulusProfile(radii=r, omegas=omegas, kind="sphere", anchor=x0, empty_shells=tuple(empty))


def pointwise_at_all_anchors(f: SampledField, radii: FloatArray) -> FloatArray:
    """ω_f(x; r_k) for every node x, stacked as ``(len(radii), nx, ny)``."""
    domain = f.domain
    included = domain.included
    table = np.zeros((len(radii), domain.nx, domain.ny))
    A, B, D = offsets_within(domain, float(radii[-1]))
    bins = np.searchsorted(radii, D, side="left")
    for a, b, k in zip(A.tolist(), B.tolist(), bins.tolist()):
        diff, (sx, sy), (tx, ty) = offset_differences(f.values, included, a, b)
        np.maximum(table[k, sx, sy], diff, out=table[k, sx, sy])
        np.maximum(table[k, tx, ty], diff, out=table[k, tx, ty])
    return np.maximum.accumulate(table, axis=0)


def sphere_at_all_anchors(f: SampledField, radii: FloatArray, shell_width: float | None = None, align: str = "inner") -> FloatArray:
    """Shell modulus at every node, stacked as ``(len(radii), nx, ny)``."""
    domain = f.domain
    w = _check_width(domain, shell_width)
    lo, hi = shell_bounds(radii, w, align)
    included = domain.included
    table = np.zeros((len(radii), domain.nx, domain.ny))
    A, B, D = offsets_within(domain, float(hi[-1]))
    # node k holds offset length d when lo[k] <= d <= hi[k]; lo and hi are increasing
    first = np.searchsorted(hi, D, side="left")
    last = np.searchsorted(lo, D, side="right")
    for a, b, k0, k1 in zip(A.tolist(), B.tolist(), first.tolist(), last.tolist()):
        if k1 <= k0:
            continue
        diff, (sx, sy), (tx, ty) = offset_differences(f.values, included, a, b)
        block = table[k0:k1]
        np.maximum(block[:, sx, sy], diff, out=block[:, sx, sy])
        np.maximum(block[:, tx, ty], diff, out=block[:, tx, ty])
    return table


def _all_pairs(f: SampledField) -> tuple[FloatArray, FloatArray]:
    domain = f.domain
    I, J = np.meshgrid(np.arange(domain.nx), np.arange(domain.ny), indexing="ij")
    inc = domain.included
    i, j, v = I[inc], J[inc], f.values[inc]
    p, q = np.triu_indices(len(v), k=1)
    d = domain.pair_distance(np.abs(i[q] - i[p]), np.abs(j[q] - j[p]))
    return d, np.abs(v[q] - v[p])


def modulus_global_naive(f: SampledField, radii: npt.ArrayLike) -> ModulusProfile:
    """Reference ω_f(r) by a direct pass over all pairs for every radius."""
    r = _check_radii(radii)
    d, diff = _all_pairs(f)
    omegas = np.array([diff[d <= rk].max() if np.any(d <= rk) else 0.0 for rk in r])
    return ModulusProfile(radii=r, omegas=omegas, kind="global", clamped=bool(r[-1] > f.domain.diameter))


def pointwise_naive(f: SampledField, x0: tuple[float, float], radii: npt.ArrayLike) -> ModulusProfile:
    """Reference ω_f(x0; r) by a direct scan of the ball for every radius."""
    r = _check_radii(radii)
    i0, j0 = f.domain.index_of(x0)
    omegas = np.zeros_like(r)
    domain = f.domain
    for k, rk in enumerate(r):
        best = 0.0
        for i in range(domain.nx):
            for j in range(domain.ny):
                if domain.included[i, j] and domain.pair_distance(abs(i - i0), abs(j - j0)) <= rk:
                    best = max(best, abs(f.values[i, j] - f.values[i0, j0]))
        omegas[k] = best
    return ModulusProfile(radii=r, omegas=omegas, kind="pointwise", anchor=x0)
