"""Poisson-Dirichlet problem on the square by sine-transform diagonalization."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy import fft

from dinilab.checks import observed_order
from dinilab.elliptic.operators import laplacian_5pt, rot
from dinilab.errors import UnsupportedDomainError
from dinilab.grid import Domain, FloatArray, SampledField, VectorField

logger = logging.getLogger(__name__)


def dirichlet_eigenvalues(n: int, h: float) -> FloatArray:
    """Eigenvalues of the 1-D -D² with zero ends on ``n`` nodes (``n - 2`` unknowns)."""
    k = np.arange(1, n - 1)
    return 4.0 / h**2 * np.sin(0.5 * np.pi * k / (n - 1)) ** 2


def require_square(domain: Domain, solver: str) -> None:
    if not domain.is_square:
        raise UnsupportedDomainError(f"{solver} needs an unmasked rectangular grid, got shape {domain.shape!r}")


def poisson_solve(theta: SampledField, workers: int = 1) -> SampledField:
    """Solve -Δ₅ψ = θ at interior nodes with ψ = 0 on the boundary."""
    domain = theta.domain
    require_square(domain, "poisson_solve")
    rhs = theta.values[1:-1, 1:-1]
    psi = np.zeros((domain.nx, domain.ny))
    if rhs.size and np.any(rhs):
        lam = dirichlet_eigenvalues(domain.nx, domain.dx)[:, None] + dirichlet_eigenvalues(domain.ny, domain.dy)[None, :]
        coeffs = fft.dstn(rhs, type=1, workers=workers)
        psi[1:-1, 1:-1] = fft.idstn(coeffs / lam, type=1, workers=workers)
    solution = SampledField(domain, psi)
    logger.debug("poisson %dx%d: relative residual %.2e", domain.nx, domain.ny, poisson_residual(solution, theta))
    return solution


def poisson_residual(psi: SampledField, theta: SampledField) -> float:
    """max |-Δ₅ψ - θ| over interior nodes, relative to max |θ|."""
    residual = np.abs(-laplacian_5pt(psi) - theta.values[1:-1, 1:-1])
    scale = float(np.abs(theta.values[1:-1, 1:-1]).max()) if residual.size else 0.0
    if residual.size == 0:
        return 0.0
    return float(residual.max()) / scale if scale > 0 else float(residual.max())


def velocity_from_vorticity(theta: SampledField, workers: int = 1) -> VectorField:
    """Divergence-free velocity tangent to the walls whose curl is θ."""
    return rot(poisson_solve(theta, workers=workers))


def poisson_convergence(grids: Sequence[int] = (65, 129), workers: int = 1) -> tuple[list[float], float]:
    """Max errors on the sin(πx)sin(πy) eigenproblem and the observed order of the last pair."""
    errors, spacings = [], []
    for n in grids:
        domain = Domain.unit_square(n)
        X, Y = domain.mesh()
        exact = np.sin(np.pi * X) * np.sin(np.pi * Y)
        psi = poisson_solve(SampledField(domain, 2.0 * np.pi**2 * exact), workers=workers)
        errors.append(float(np.abs(psi.values - exact).max()))
        spacings.append(domain.dx)
    order = observed_order(errors, spacings)
    logger.info("poisson convergence: errors %s, order %.3f", ["%.3e" % e for e in errors], order)
    return errors, order
