"""Uniform grids, sampled scalar fields and staggered vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from dinilab.errors import InvalidArgumentError

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]
PointFunction = Callable[[FloatArray, FloatArray], FloatArray]

SHAPES = ("square", "disk")


@dataclass(frozen=True, eq=False)
class Domain:
    """Uniform node lattice over a rectangle, optionally restricted by a boolean mask.

    Arrays on the domain are indexed ``[i, j]`` with ``i`` along x (``indexing="ij"``).
    """

    x0: float
    y0: float
    dx: float
    dy: float
    nx: int
    ny: int
    shape: str = "square"
    mask: BoolArray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.dx <= 0 or self.dy <= 0:
            raise InvalidArgumentError(f"grid spacing must be positive, got dx={self.dx}, dy={self.dy}")
        if self.nx < 2 or self.ny < 2:
            raise InvalidArgumentError(f"grid needs at least 2x2 points, got {self.nx}x{self.ny}")
        if self.shape not in SHAPES:
            raise InvalidArgumentError(f"unknown domain shape {self.shape!r}")
        if self.mask is not None:
            mask = np.asarray(self.mask, dtype=bool)
            if mask.shape != (self.nx, self.ny):
                raise InvalidArgumentError(f"mask shape {mask.shape} does not match grid {(self.nx, self.ny)}")
            if not mask.any():
                raise InvalidArgumentError("mask includes no grid points")
            mask = mask.copy()
            mask.flags.writeable = False
            object.__setattr__(self, "mask", mask)
        elif self.shape == "disk":
            raise InvalidArgumentError("disk domain requires an inclusion mask")

    @classmethod
    def unit_square(cls, n: int) -> Domain:
        """Square [0, 1]^2 with ``n`` nodes per side."""
        h = 1.0 / (n - 1)
        return cls(x0=0.0, y0=0.0, dx=h, dy=h, nx=n, ny=n)

    @classmethod
    def disk(cls, n: int, radius: float = 1.0, center: tuple[float, float] = (0.0, 0.0)) -> Domain:
        """Disk of the given radius, masked out of its bounding square with ``n`` nodes per side."""
        h = 2.0 * radius / (n - 1)
        x0, y0 = center[0] - radius, center[1] - radius
        i = np.arange(n)
        X, Y = np.meshgrid(x0 + h * i, y0 + h * i, indexing="ij")
        mask = np.hypot(X - center[0], Y - center[1]) <= radius * (1.0 + 1e-12)
        return cls(x0=x0, y0=y0, dx=h, dy=h, nx=n, ny=n, shape="disk", mask=mask)

    @property
    def spacing(self) -> float:
        """The larger of the two grid spacings."""
        return max(self.dx, self.dy)

    @property
    def is_square(self) -> bool:
        return self.shape == "square" and self.mask is None

    @property
    def x(self) -> FloatArray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self) -> FloatArray:
        return self.y0 + self.dy * np.arange(self.ny)

    @property
    def x1(self) -> float:
        return self.x0 + self.dx * (self.nx - 1)

    @property
    def y1(self) -> float:
        return self.y0 + self.dy * (self.ny - 1)

    @property
    def included(self) -> BoolArray:
        """Inclusion grid; all True for an unmasked rectangle."""
        if self.mask is None:
            return np.ones((self.nx, self.ny), dtype=bool)
        return self.mask

    def mesh(self) -> tuple[FloatArray, FloatArray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    def pair_distance(self, a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
        """Euclidean length of index offsets ``(a, b)``.

        Every pairwise computation goes through this so that distances compare bit-for-bit.
        """
        return np.hypot(np.asarray(a, dtype=np.float64) * self.dx, np.asarray(b, dtype=np.float64) * self.dy)

    @cached_property
    def diameter(self) -> float:
        """Maximum distance between included points."""
        if self.mask is None:
            return float(self.pair_distance(self.nx - 1, self.ny - 1))
        X, Y = self.mesh()
        points = np.column_stack([X[self.mask], Y[self.mask]])
        if len(points) == 1:
            return 0.0
        try:
            points = points[ConvexHull(points).vertices]
        except QhullError:
            pass
        return float(pdist(points).max())

    def index_of(self, point: tuple[float, float]) -> tuple[int, int]:
        """Grid index of ``point``, which must be an included grid node."""
        fi = (point[0] - self.x0) / self.dx
        fj = (point[1] - self.y0) / self.dy
        i, j = int(round(fi)), int(round(fj))
        if abs(fi - i) > 1e-9 or abs(fj - j) > 1e-9:
            raise InvalidArgumentError(f"point {point} is not a grid node")
        if not (0 <= i < self.nx and 0 <= j < self.ny) or not self.included[i, j]:
            raise InvalidArgumentError(f"point {point} lies outside the domain")
        return i, j

    def outside_distance(self, x: FloatArray, y: FloatArray) -> FloatArray:
        """Distance by which points lie outside the closed domain (0 inside)."""
        ex = np.maximum(np.maximum(self.x0 - x, x - self.x1), 0.0)
        ey = np.maximum(np.maximum(self.y0 - y, y - self.y1), 0.0)
        outside = np.hypot(ex, ey)
        if self.shape == "disk":
            cx, cy = 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)
            radius = 0.5 * (self.x1 - self.x0)
            outside = np.maximum(outside, np.hypot(x - cx, y - cy) - radius)
        return outside

    def clamp(self, x: FloatArray, y: FloatArray) -> tuple[FloatArray, FloatArray, BoolArray]:
        """Project points onto the closed domain; also returns which points moved."""
        cx = np.clip(x, self.x0, self.x1)
        cy = np.clip(y, self.y0, self.y1)
        if self.shape == "disk":
            ox, oy = 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)
            radius = 0.5 * (self.x1 - self.x0)
            r = np.hypot(cx - ox, cy - oy)
            scale = np.where(r > radius, radius / np.where(r > 0, r, 1.0), 1.0)
            cx, cy = ox + (cx - ox) * scale, oy + (cy - oy) * scale
        moved = (cx != x) | (cy != y)
        return cx, cy, moved


class GridInterpolant:
    """Evaluate lattice data at arbitrary points with bilinear (order 1) or bicubic (order 3) splines.

    Points beyond the lattice take the nearest edge value.
    """

    def __init__(self, values: FloatArray, origin: tuple[float, float], spacing: tuple[float, float], order: int = 1):
        if order not in (1, 3):
            raise InvalidArgumentError(f"interpolation order must be 1 or 3, got {order}")
        self.order = order
        self.origin = origin
        self.spacing = spacing
        values = np.asarray(values, dtype=np.float64)
        self.shape = values.shape
        self._coeffs = ndimage.spline_filter(values, order=3, mode="nearest") if order == 3 else values

    def __call__(self, x: FloatArray, y: FloatArray) -> FloatArray:
        fi = np.clip((np.asarray(x) - self.origin[0]) / self.spacing[0], 0.0, self.shape[0] - 1)
        fj = np.clip((np.asarray(y) - self.origin[1]) / self.spacing[1], 0.0, self.shape[1] - 1)
        coords = np.stack([np.ravel(fi), np.ravel(fj)])
        out = ndimage.map_coordinates(self._coeffs, coords, order=self.order, mode="nearest", prefilter=False)
        return out.reshape(np.shape(fi))


@dataclass(frozen=True, eq=False)
class SampledField:
    """Scalar values on the nodes of a domain; entries outside the mask are stored as 0."""

    domain: Domain
    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        expected = (self.domain.nx, self.domain.ny)
        if values.shape != expected:
            raise InvalidArgumentError(f"values shape {values.shape} does not match grid {expected}")
        included = self.domain.included
        if not np.isfinite(values[included]).all():
            raise InvalidArgumentError("field values must be finite on the domain")
        values = np.where(included, values, 0.0)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, domain: Domain, func: PointFunction) -> SampledField:
        X, Y = domain.mesh()
        return cls(domain, np.broadcast_to(func(X, Y), X.shape))

    @classmethod
    def zeros(cls, domain: Domain) -> SampledField:
        return cls(domain, np.zeros((domain.nx, domain.ny)))

    @property
    def sup(self) -> float:
        """Sup-norm over included points."""
        return float(np.abs(self.values[self.domain.included]).max())

    def with_values(self, values: npt.ArrayLike) -> SampledField:
        return SampledField(self.domain, np.asarray(values, dtype=np.float64))

    def __add__(self, other: SampledField) -> SampledField:
        return self.with_values(self.values + other.values)

    def __sub__(self, other: SampledField) -> SampledField:
        return self.with_values(self.values - other.values)

    def __mul__(self, scale: float) -> SampledField:
        return self.with_values(scale * self.values)

    __rmul__ = __mul__

    def interpolant(self, order: int = 1) -> GridInterpolant:
        return GridInterpolant(self.values, (self.domain.x0, self.domain.y0), (self.domain.dx, self.domain.dy), order)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Velocity on the edges of the node lattice.

    ``v1`` has shape ``(nx, ny - 1)`` at ``(x_i, y_{j+1/2})`` and ``v2`` has shape ``(nx - 1, ny)`` at
    ``(x_{i+1/2}, y_j)``. This is the MAC lattice: pressure sits at cell centres, the stream function
    at nodes.
    """

    domain: Domain
    v1: FloatArray
    v2: FloatArray

    def __post_init__(self) -> None:
        d = self.domain
        v1 = np.array(self.v1, dtype=np.float64)
        v2 = np.array(self.v2, dtype=np.float64)
        if v1.shape != (d.nx, d.ny - 1) or v2.shape != (d.nx - 1, d.ny):
            raise InvalidArgumentError(
                f"staggered shapes {v1.shape}, {v2.shape} do not match grid {(d.nx, d.ny)}"
            )
        if not (np.isfinite(v1).all() and np.isfinite(v2).all()):
            raise InvalidArgumentError("velocity components must be finite")
        v1.flags.writeable = False
        v2.flags.writeable = False
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)

    @classmethod
    def zeros(cls, domain: Domain) -> VectorField:
        return cls(domain, np.zeros((domain.nx, domain.ny - 1)), np.zeros((domain.nx - 1, domain.ny)))

    @classmethod
    def from_functions(cls, domain: Domain, f1: PointFunction, f2: PointFunction) -> VectorField:
        """Sample each component at its own edge locations."""
        (x1, y1), (x2, y2) = edge_points(domain)
        X1, Y1 = np.meshgrid(x1, y1, indexing="ij")
        X2, Y2 = np.meshgrid(x2, y2, indexing="ij")
        return cls(domain, np.broadcast_to(f1(X1, Y1), X1.shape), np.broadcast_to(f2(X2, Y2), X2.shape))

    @property
    def sup(self) -> float:
        """Largest absolute component value."""
        return float(max(np.abs(self.v1).max(), np.abs(self.v2).max()))

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(self.domain, self.v1 + other.v1, self.v2 + other.v2)

    def __sub__(self, other: VectorField) -> VectorField:
        return VectorField(self.domain, self.v1 - other.v1, self.v2 - other.v2)

    def __mul__(self, scale: float) -> VectorField:
        return VectorField(self.domain, scale * self.v1, scale * self.v2)

    __rmul__ = __mul__

    def divergence(self) -> FloatArray:
        """Cell-centred divergence, shape ``(nx - 1, ny - 1)``."""
        d = self.domain
        return np.diff(self.v1, axis=0) / d.dx + np.diff(self.v2, axis=1) / d.dy

    def nodal(self) -> tuple[FloatArray, FloatArray]:
        """Components averaged onto the nodes (edge values copied at the outer rows)."""
        v1 = np.concatenate([self.v1[:, :1], self.v1, self.v1[:, -1:]], axis=1)
        v2 = np.concatenate([self.v2[:1, :], self.v2, self.v2[-1:, :]], axis=0)
        return 0.5 * (v1[:, 1:] + v1[:, :-1]), 0.5 * (v2[1:, :] + v2[:-1, :])

    def interpolants(self, order: int = 1) -> tuple[GridInterpolant, GridInterpolant]:
        d = self.domain
        spacing = (d.dx, d.dy)
        return (
            GridInterpolant(self.v1, (d.x0, d.y0 + 0.5 * d.dy), spacing, order),
            GridInterpolant(self.v2, (d.x0 + 0.5 * d.dx, d.y0), spacing, order),
        )


def edge_points(domain: Domain) -> tuple[tuple[FloatArray, FloatArray], tuple[FloatArray, FloatArray]]:
    """Coordinate axes of the v1 and v2 edge lattices."""
    x, y = domain.x, domain.y
    return (x, y[:-1] + 0.5 * domain.dy), (x[:-1] + 0.5 * domain.dx, y)


def cell_centers(domain: Domain) -> tuple[FloatArray, FloatArray]:
    return domain.x[:-1] + 0.5 * domain.dx, domain.y[:-1] + 0.5 * domain.dy
