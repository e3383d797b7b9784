"""Simulator, calibrator and optimizer for an expandable-bit drilling robot."""

from .drilling import OperatingPoint, solve_operating_point
from .errors import MoleDrillError
from .quantities import Config, load_config, load_config_file, load_records

__all__ = [
    "Config",
    "MoleDrillError",
    "OperatingPoint",
    "load_config",
    "load_config_file",
    "load_records",
    "solve_operating_point",
]
__version__ = "0.1.0"
