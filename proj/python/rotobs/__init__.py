"""Attitude observers with gyro-bias and angular-momentum fusion."""

from ._core import (
    InvalidConfig,
    InvalidRotation,
    NonFiniteState,
    exp_so3,
    linearize,
    log_so3,
    monte_carlo,
    psi,
    quat_to_rot,
    rot_to_quat,
    sigma,
    simulate,
    skew,
    unskew,
)

__all__ = [
    "InvalidConfig",
    "InvalidRotation",
    "NonFiniteState",
    "exp_so3",
    "linearize",
    "log_so3",
    "monte_carlo",
    "psi",
    "quat_to_rot",
    "rot_to_quat",
    "sigma",
    "simulate",
    "skew",
    "unskew",
]
__version__ = "0.1.0"
