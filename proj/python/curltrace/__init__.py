"""Tangential traces of bounded curl-measure fields on analytic sets of
finite perimeter: half-ball trace estimation, mollified boundary
restrictions, and the scenario verification suite."""

from ._core import (
    ConfigError,
    NumericalError,
    Scenario,
    ball,
    check,
    cube,
    cube_gradient,
    half_space,
    list_scenarios,
    mollifier_mass,
    trace_csv,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "Scenario",
    "ball",
    "check",
    "cube",
    "cube_gradient",
    "half_space",
    "list_scenarios",
    "mollifier_mass",
    "trace_csv",
]

__version__ = "0.1.0"
