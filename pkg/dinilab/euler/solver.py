"""Windowed Picard iteration for 2-D Euler in vorticity form.

Within a window [t0, t1] the vorticity guess θ at the substep times is mapped to ψ (Poisson), to
v = rot ψ, to the backward characteristics U, and finally to ζ = ζ(t0)∘U + ∫ φ along U. The
fixed point of this map is the solution on the window; its end state seeds the next window.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from dinilab.elliptic.operators import gradient_sup, rot
from dinilab.elliptic.poisson import poisson_solve
from dinilab.errors import InvalidArgumentError, InvariantViolationError, SolverFailureError
from dinilab.euler.series import Forcing, VelocitySeries, forcing_sup, trapezoid
from dinilab.euler.tracing import flow_map
from dinilab.euler.transport import transport_along
from dinilab.funcspace.seminorms import dini_table, reduce_table, resolve_cutoffs
from dinilab.funcspace.quadrature import DEFAULT_NODES, log_nodes
from dinilab.grid import SampledField, VectorField

logger = logging.getLogger(__name__)

MEMBERSHIP_SLACK = 0.01


@dataclass(frozen=True, eq=False)
class EulerState:
    """Vorticity, stream function and velocity at one time."""

    t: float
    vorticity: SampledField
    stream: SampledField
    velocity: VectorField

    @classmethod
    def from_vorticity(cls, t: float, vorticity: SampledField, workers: int = 1) -> EulerState:
        stream = poisson_solve(vorticity, workers=workers)
        return cls(t, vorticity, stream, rot(stream))


@dataclass
class WindowRecord:
    """Picard history of one window."""

    t0: float
    t1: float
    residuals: list[float] = field(default_factory=list)
    fixed_point_residual: float | None = None
    max_sup: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.residuals)

    @property
    def contracting(self) -> bool:
        """Whether the residuals decreased at every iteration."""
        return all(b < a for a, b in zip(self.residuals, self.residuals[1:]))


@dataclass
class PicardSettings:
    substeps: int = 8
    rk_steps: int = 4
    order: int = 1
    workers: int = 1


@dataclass
class EulerTrajectory:
    """States at every substep time plus sampled norm and seminorm histories."""

    states: list[EulerState]
    B: float
    T: float
    window: float
    forcing: Forcing | None = None
    windows: list[WindowRecord] = field(default_factory=list)
    output_times: list[float] = field(default_factory=list)
    histories: dict[str, list[float]] = field(default_factory=dict)
    cutoffs: tuple[float, float] | None = None
    c1: float | None = None
    settings: PicardSettings = field(default_factory=PicardSettings)

    @property
    def times(self) -> list[float]:
        return [state.t for state in self.states]

    @property
    def initial(self) -> EulerState:
        return self.states[0]

    @property
    def final(self) -> EulerState:
        return self.states[-1]

    @property
    def delta(self) -> float | None:
        """Hölder exponent e^{-c1 B T} of the flow map, once c1 is fitted."""
        return None if self.c1 is None else math.exp(-self.c1 * self.B * self.T)

    def state_at(self, t: float) -> EulerState:
        for state in self.states:
            if math.isclose(state.t, t, rel_tol=0.0, abs_tol=1e-12):
                return state
        raise InvalidArgumentError(f"trajectory has no state at t={t}")

    def velocity_series(self) -> VelocitySeries:
        return VelocitySeries(self.times, [state.velocity for state in self.states], self.settings.order)


def bound_B(zeta0: SampledField, phi: Forcing | None, T: float, samples: int = 65) -> float:
    """B = ‖ζ0‖ + ∫_0^T ‖φ(s)‖ ds."""
    if phi is None:
        return zeta0.sup
    times = np.linspace(0.0, T, samples)
    return zeta0.sup + trapezoid(times, [forcing_sup(phi, zeta0.domain, float(s)) for s in times])


def picard_step(
    theta: Sequence[SampledField],
    times: Sequence[float],
    zeta_start: SampledField,
    phi: Forcing | None,
    B: float,
    settings: PicardSettings | None = None,
) -> list[SampledField]:
    """One application of θ → ψ → v → U → ζ on a window.

    ``theta[m]`` is the guess at ``times[m]``; ``times[0]`` is the window start where ζ equals
    ``zeta_start``. Raises InvariantViolationError if the guess leaves ‖θ‖_T ≤ B.
    """
    settings = settings or PicardSettings()
    if len(theta) != len(times):
        raise InvalidArgumentError("one vorticity guess per window time is required")
    largest = max(t.sup for t in theta)
    if largest > B * (1.0 + MEMBERSHIP_SLACK) + 1e-12:
        raise InvariantViolationError("picard iterate sup-norm", largest, B)
    velocities = [rot(poisson_solve(t, workers=settings.workers)) for t in theta]
    series = VelocitySeries(times, velocities, settings.order)
    updated = [zeta_start]
    for m in range(1, len(times)):
        fmap = flow_map(series, times[m], times[0], intervals=m, rk_steps=settings.rk_steps)
        updated.append(transport_along(zeta_start, phi, fmap, settings.order))
    return updated


def _residual(a: Sequence[SampledField], b: Sequence[SampledField]) -> float:
    return max(float(np.abs(x.values - y.values).max()) for x, y in zip(a, b))


def solve_window(
    zeta_start: SampledField,
    phi: Forcing | None,
    times: Sequence[float],
    B: float,
    tol: float,
    max_iters: int,
    settings: PicardSettings,
    verify: bool = True,
) -> tuple[list[SampledField], WindowRecord]:
    """Picard iteration on one window until the sup-residual drops to ``tol``."""
    record = WindowRecord(t0=times[0], t1=times[-1])
    theta = [zeta_start] * len(times)
    for _ in range(max_iters):
        updated = picard_step(theta, times, zeta_start, phi, B, settings)
        residual = _residual(updated, theta)
        record.residuals.append(residual)
        theta = updated
        if residual <= tol:
            break
    else:
        raise SolverFailureError("picard", record.residuals, f"window [{times[0]:.4g}, {times[-1]:.4g}]")
    if verify:
        record.fixed_point_residual = _residual(picard_step(theta, times, zeta_start, phi, B, settings), theta)
    record.max_sup = max(t.sup for t in theta)
    if not record.contracting:
        logger.info("window [%.4g, %.4g]: residuals not monotone %s", record.t0, record.t1, record.residuals)
    logger.debug("window [%.4g, %.4g]: %d Picard iterations", record.t0, record.t1, record.iterations)
    return theta, record


def seminorm_histories(
    states: Sequence[EulerState], rho: float | None, r_lo: float | None, nodes: int = DEFAULT_NODES
) -> tuple[dict[str, list[float]], tuple[float, float]]:
    """Sup, Dini seminorms and ‖∇v‖ of each state at shared cutoffs."""
    histories: dict[str, list[float]] = {key: [] for key in ("sup", "cstar", "bstar", "dstar", "grad_v")}
    rho, r_lo = resolve_cutoffs(states[0].vorticity, rho, r_lo)
    radii = log_nodes(r_lo, rho, nodes)
    for state in states:
        zeta = state.vorticity
        histories["sup"].append(zeta.sup)
        for kind in ("cstar", "bstar", "dstar"):
            histories[kind].append(reduce_table(zeta, radii, dini_table(zeta, kind, radii)))
        histories["grad_v"].append(gradient_sup(state.velocity))
    return histories, (rho, r_lo)


def window_times(T: float, window: float, substeps: int) -> list[list[float]]:
    """Substep times of each window; the last window is shortened to end at T."""
    if window <= 0 or T <= 0:
        raise InvalidArgumentError(f"T and the window length must be positive, got T={T}, window={window}")
    if substeps < 1:
        raise InvalidArgumentError(f"windows need at least one substep, got {substeps}")
    count = max(1, math.ceil(T / window - 1e-12))
    edges = [min(k * window, T) for k in range(count + 1)]
    edges[-1] = T
    return [[a + (b - a) * m / substeps for m in range(substeps + 1)] for a, b in zip(edges, edges[1:])]


def euler_solve(
    zeta0: SampledField,
    phi: Forcing | None = None,
    T: float = 1.0,
    window: float = 0.25,
    tol: float = 1e-10,
    max_iters: int = 60,
    settings: PicardSettings | None = None,
    track_seminorms: bool = True,
    rho: float | None = None,
    r_lo: float | None = None,
    progress: Callable[[float], None] | None = None,
) -> EulerTrajectory:
    """Solve on [0, T] window by window; histories are sampled at the window ends."""
    settings = settings or PicardSettings()
    B = bound_B(zeta0, phi, T)
    logger.info("euler: T=%.4g window=%.4g B=%.6g", T, window, B)
    states = [EulerState.from_vorticity(0.0, zeta0, settings.workers)]
    records = []
    output_times = [0.0]
    zeta_start = zeta0
    for times in window_times(T, window, settings.substeps):
        theta, record = solve_window(zeta_start, phi, times, B, tol, max_iters, settings)
        records.append(record)
        states.extend(EulerState.from_vorticity(t, z, settings.workers) for t, z in zip(times[1:], theta[1:]))
        zeta_start = theta[-1]
        output_times.append(times[-1])
        logger.info("window [%.4g, %.4g] converged in %d iterations", record.t0, record.t1, record.iterations)
        if progress is not None:
            progress(times[-1])
    trajectory = EulerTrajectory(
        states=states,
        B=B,
        T=T,
        window=window,
        forcing=phi,
        windows=records,
        output_times=output_times,
        settings=settings,
    )
    if track_seminorms:
        outputs = [trajectory.state_at(t) for t in output_times]
        trajectory.histories, trajectory.cutoffs = seminorm_histories(outputs, rho, r_lo)
    return trajectory
