"""Poisson and Stokes solvers, velocity reconstruction and regularity checks."""

from __future__ import annotations

from .greens import greens_decay_checks, greens_disk, greens_disk_gradient, greens_potential
from .operators import c2_norm, curl, gradient_sup, laplacian_5pt, lipschitz_seminorm, rot
from .poisson import poisson_convergence, poisson_solve, velocity_from_vorticity
from .regularity import FAMILIES, regularity_ratio_study
from .stokes import StokesSolution, manufactured_stokes, stokes_convergence, stokes_solve

__all__ = [
    "FAMILIES",
    "StokesSolution",
    "c2_norm",
    "curl",
    "gradient_sup",
    "greens_decay_checks",
    "greens_disk",
    "greens_disk_gradient",
    "greens_potential",
    "laplacian_5pt",
    "lipschitz_seminorm",
    "manufactured_stokes",
    "poisson_convergence",
    "poisson_solve",
    "regularity_ratio_study",
    "rot",
    "stokes_convergence",
    "stokes_solve",
    "velocity_from_vorticity",
]
