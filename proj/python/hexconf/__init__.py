"""Discrete conformal geometry on the hexagonal lattice."""

from ._core import (
    Fan,
    HexconfError,
    __version__,
    angles,
    average_weights,
    circumcircle,
    develop_constant_gradient,
    dihedral_angle,
    fd_check,
    find_overlap_radius,
    flow_stress,
    gradient_feasibility_limit,
    klein_stereographic,
    length_cross_ratio,
    regular_flat_factor,
    report_text,
    run,
    sample_D0,
    search_counterexample,
    solve_flat,
)

__all__ = [
    "Fan",
    "HexconfError",
    "__version__",
    "angles",
    "average_weights",
    "circumcircle",
    "develop_constant_gradient",
    "dihedral_angle",
    "fd_check",
    "find_overlap_radius",
    "flow_stress",
    "gradient_feasibility_limit",
    "klein_stereographic",
    "length_cross_ratio",
    "regular_flat_factor",
    "report_text",
    "run",
    "sample_D0",
    "search_counterexample",
    "solve_flat",
]
