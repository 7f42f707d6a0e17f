"""Stokes system -Δu + ∇p = f, u = 0 on the walls, on the MAC lattice.

Velocity unknowns sit on interior wall-normal edges; the no-slip condition on tangential
components is imposed by odd reflection across the wall. Each velocity block of -Δ is then
diagonalized exactly by sine transforms (type I across the walls it is normal to, type II along
the reflected direction), and the pressure solves the Schur complement G^T A^{-1} G p = -D A^{-1} f
by conjugate gradients.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import fft
from scipy.sparse.linalg import LinearOperator, cg

from dinilab.checks import observed_order
from dinilab.elliptic.poisson import dirichlet_eigenvalues, require_square
from dinilab.errors import SolverFailureError
from dinilab.grid import Domain, FloatArray, SampledField, VectorField, cell_centers, edge_points

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StokesSolution:
    """Staggered velocity and mean-zero cell-centred pressure."""

    velocity: VectorField
    pressure: SampledField
    iterations: int = 0
    residuals: list[float] = field(default_factory=list)


def cell_domain(domain: Domain) -> Domain:
    """Lattice of cell centres of ``domain``."""
    return Domain(
        x0=domain.x0 + 0.5 * domain.dx,
        y0=domain.y0 + 0.5 * domain.dy,
        dx=domain.dx,
        dy=domain.dy,
        nx=domain.nx - 1,
        ny=domain.ny - 1,
    )


def reflected_eigenvalues(m: int, h: float) -> FloatArray:
    """Eigenvalues of the 1-D -D² on ``m`` cell-centred unknowns with odd reflection at both ends."""
    k = np.arange(1, m + 1)
    return 4.0 / h**2 * np.sin(0.5 * np.pi * k / m) ** 2


class MACOperators:
    """-Δ⁻¹ on each velocity block, the pressure gradient and the divergence on one grid."""

    def __init__(self, domain: Domain, workers: int = 1):
        self.domain = domain
        self.workers = workers
        nx, ny = domain.nx, domain.ny
        self.lam1 = dirichlet_eigenvalues(nx, domain.dx)[:, None] + reflected_eigenvalues(ny - 1, domain.dy)[None, :]
        self.lam2 = reflected_eigenvalues(nx - 1, domain.dx)[:, None] + dirichlet_eigenvalues(ny, domain.dy)[None, :]

    def solve_u1(self, rhs: FloatArray) -> FloatArray:
        w = self.workers
        coeffs = fft.dst(fft.dst(rhs, type=1, axis=0, workers=w), type=2, axis=1, workers=w)
        return fft.idst(fft.idst(coeffs / self.lam1, type=2, axis=1, workers=w), type=1, axis=0, workers=w)

    def solve_u2(self, rhs: FloatArray) -> FloatArray:
        w = self.workers
        coeffs = fft.dst(fft.dst(rhs, type=2, axis=0, workers=w), type=1, axis=1, workers=w)
        return fft.idst(fft.idst(coeffs / self.lam2, type=1, axis=1, workers=w), type=2, axis=0, workers=w)

    def gradient(self, p: FloatArray) -> tuple[FloatArray, FloatArray]:
        """Pressure gradient on the interior edges."""
        return np.diff(p, axis=0) / self.domain.dx, np.diff(p, axis=1) / self.domain.dy

    def divergence(self, u1: FloatArray, u2: FloatArray) -> FloatArray:
        """Cell divergence of interior-edge unknowns, walls contributing zero."""
        pad1 = np.pad(u1, ((1, 1), (0, 0)))
        pad2 = np.pad(u2, ((0, 0), (1, 1)))
        return np.diff(pad1, axis=0) / self.domain.dx + np.diff(pad2, axis=1) / self.domain.dy

    def velocity(self, f1: FloatArray, f2: FloatArray, p: FloatArray) -> tuple[FloatArray, FloatArray]:
        g1, g2 = self.gradient(p)
        return self.solve_u1(f1 - g1), self.solve_u2(f2 - g2)

    def schur(self, p: FloatArray) -> FloatArray:
        """(G^T A^{-1} G + mean) p; the mean term fixes the constant mode."""
        g1, g2 = self.gradient(p)
        return -self.divergence(self.solve_u1(g1), self.solve_u2(g2)) + p.mean()


def stokes_solve(f: VectorField, tol: float = 1e-10, max_iters: int = 500, workers: int = 1) -> StokesSolution:
    """Solve the MAC Stokes system; the Schur residual (= the discrete divergence) ends below ``tol``."""
    domain = f.domain
    require_square(domain, "stokes_solve")
    ops = MACOperators(domain, workers=workers)
    shape = (domain.nx - 1, domain.ny - 1)
    f1, f2 = f.v1[1:-1, :], f.v2[:, 1:-1]
    rhs = -ops.divergence(ops.solve_u1(f1), ops.solve_u2(f2))
    size = shape[0] * shape[1]
    operator = LinearOperator((size, size), matvec=lambda x: ops.schur(x.reshape(shape)).ravel(), dtype=np.float64)
    b = rhs.ravel()
    residuals: list[float] = []

    def record(xk: FloatArray) -> None:
        residuals.append(float(np.linalg.norm(b - operator.matvec(xk))))

    if np.any(b):
        solution, info = cg(operator, b, rtol=0.0, atol=0.1 * tol, maxiter=max_iters, callback=record)
        if info != 0:
            raise SolverFailureError("stokes CG", residuals, f"no convergence to {tol:g}")
    else:
        solution = np.zeros(size)
    p = solution.reshape(shape)
    p = p - p.mean()
    u1, u2 = ops.velocity(f1, f2, p)
    velocity = VectorField(domain, np.pad(u1, ((1, 1), (0, 0))), np.pad(u2, ((0, 0), (1, 1))))
    logger.debug("stokes %dx%d: %d CG iterations, max div %.2e", domain.nx, domain.ny, len(residuals), float(np.abs(velocity.divergence()).max()))
    return StokesSolution(velocity, SampledField(cell_domain(domain), p), iterations=len(residuals), residuals=residuals)


def reflection_errors(v: VectorField) -> tuple[float, float]:
    """Departure from the mirror symmetry about the mid-line in y: v1 even, v2 odd.

    Both edge lattices are symmetric about the mid-line, so the mirror image is a flip of the second axis.
    """
    return float(np.abs(v.v1 - v.v1[:, ::-1]).max()), float(np.abs(v.v2 + v.v2[:, ::-1]).max())


def _poly(x: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """x²(1-x)² and its first three derivatives."""
    return (
        x**2 * (1 - x) ** 2,
        2 * x - 6 * x**2 + 4 * x**3,
        2 - 12 * x + 12 * x**2,
        -12 + 24 * x,
    )


@dataclass(frozen=True, eq=False)
class ManufacturedStokes:
    """Forcing and exact solution of the manufactured Stokes problem on one grid."""

    forcing: VectorField
    u1: FloatArray
    u2: FloatArray
    pressure: FloatArray


def manufactured_stokes(n: int) -> ManufacturedStokes:
    """u = rot((x(1-x)y(1-y))²), p = x + y - 1 on the ``n``-point unit square."""
    domain = Domain.unit_square(n)
    (x1, y1), (x2, y2) = edge_points(domain)
    X1, Y1 = np.meshgrid(x1, y1, indexing="ij")
    X2, Y2 = np.meshgrid(x2, y2, indexing="ij")
    a1, da1, dda1, _ = _poly(X1)
    b1, db1, ddb1, dddb1 = _poly(Y1)
    a2, da2, dda2, ddda2 = _poly(X2)
    b2, db2, ddb2, _ = _poly(Y2)
    f1 = -(dda1 * db1 + a1 * dddb1) + 1.0
    f2 = (ddda2 * b2 + da2 * ddb2) + 1.0
    xc, yc = cell_centers(domain)
    XC, YC = np.meshgrid(xc, yc, indexing="ij")
    p = XC + YC - 1.0
    return ManufacturedStokes(
        forcing=VectorField(domain, f1, f2),
        u1=a1 * db1,
        u2=-da2 * b2,
        pressure=p - p.mean(),
    )


def stokes_convergence(
    grids: Sequence[int] = (65, 129), tol: float = 1e-10, workers: int = 1
) -> tuple[list[float], list[float], float, float]:
    """Velocity and pressure max errors on the manufactured problem, with observed orders."""
    u_errors, p_errors, spacings = [], [], []
    for n in grids:
        problem = manufactured_stokes(n)
        solution = stokes_solve(problem.forcing, tol=tol, workers=workers)
        v = solution.velocity
        u_errors.append(float(max(np.abs(v.v1 - problem.u1).max(), np.abs(v.v2 - problem.u2).max())))
        p_errors.append(float(np.abs(solution.pressure.values - problem.pressure).max()))
        spacings.append(1.0 / (n - 1))
    u_order, p_order = observed_order(u_errors, spacings), observed_order(p_errors, spacings)
    logger.info("stokes convergence: velocity order %.3f, pressure order %.3f", u_order, p_order)
    return u_errors, p_errors, u_order, p_order
