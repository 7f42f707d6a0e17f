"""2-D Euler in vorticity form: characteristics, transport, Picard solver and estimate checks."""

from __future__ import annotations

from .diagnostics import calibrate, conservation_checks, diagnostics, fit_c1, fixed_point_checks, steady_state_check
from .series import FieldSeries, VelocitySeries
from .solver import EulerState, EulerTrajectory, PicardSettings, euler_solve, picard_step
from .tracing import FlowMap, advect_trace, flow_map
from .transport import transport_vorticity

__all__ = [
    "EulerState",
    "EulerTrajectory",
    "FieldSeries",
    "FlowMap",
    "PicardSettings",
    "VelocitySeries",
    "advect_trace",
    "calibrate",
    "conservation_checks",
    "diagnostics",
    "euler_solve",
    "fit_c1",
    "fixed_point_checks",
    "flow_map",
    "picard_step",
    "steady_state_check",
    "transport_vorticity",
]
