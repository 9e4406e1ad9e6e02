"""Control Lyapunov functions for 2D single-input bilinear systems."""

from ._clf2d import (  # noqa: F401
    Clf2dError,
    ConfigError,
    analyze,
    design,
    gutman_u,
    simulate,
    sontag_u,
    verify,
)

__all__ = [
    "analyze",
    "design",
    "verify",
    "simulate",
    "gutman_u",
    "sontag_u",
    "ConfigError",
    "Clf2dError",
]
