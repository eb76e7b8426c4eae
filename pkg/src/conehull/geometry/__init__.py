"""Deterministic d-dimensional geometry."""

from .hull import Hull, contains_point, convex_hull, euler_characteristic, f_vector
from .lp import linprog_eq, point_in_conv_lp
from .measures import (
    complement_power_integral,
    facet_volumes,
    hull_volume,
    radial_function,
    simplex_volume,
    t_functional,
    uniform_directions,
)
from .subspace import Subspace, affine_intersects_hull, batch_affine_intersects, haar_subspace, project_points

__all__ = [
    "Hull",
    "Subspace",
    "affine_intersects_hull",
    "batch_affine_intersects",
    "complement_power_integral",
    "contains_point",
    "convex_hull",
    "euler_characteristic",
    "f_vector",
    "facet_volumes",
    "haar_subspace",
    "hull_volume",
    "linprog_eq",
    "point_in_conv_lp",
    "project_points",
    "radial_function",
    "simplex_volume",
    "t_functional",
    "uniform_directions",
]
