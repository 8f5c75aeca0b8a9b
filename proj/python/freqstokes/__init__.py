"""Frequency-domain stabilized finite-element solver for unsteady Stokes flow."""

from freqstokes._core import (
    BoundaryCondition,
    CaseConfig,
    ConfigError,
    Mesh,
    MeshError,
    Solution,
    bessel_j,
    case_from_json,
    channel_velocity,
    default_alpha_grid,
    generate_channel,
    generate_pipe,
    generate_pipe_target,
    omega_for_alpha,
    pipe_flow_rate,
    pipe_velocity,
    read_mesh,
    reconstruct_time,
    solve,
    write_mesh,
)

__all__ = [
    "BoundaryCondition",
    "CaseConfig",
    "ConfigError",
    "Mesh",
    "MeshError",
    "Solution",
    "bessel_j",
    "case_from_json",
    "channel_velocity",
    "default_alpha_grid",
    "generate_channel",
    "generate_pipe",
    "generate_pipe_target",
    "omega_for_alpha",
    "pipe_flow_rate",
    "pipe_velocity",
    "read_mesh",
    "reconstruct_time",
    "solve",
    "write_mesh",
]
