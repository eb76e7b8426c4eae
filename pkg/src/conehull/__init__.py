"""Random polyhedral cones, their sections and power-law Poisson hulls."""

from . import closed_forms
from .conic import (
    Cone,
    ConicProfile,
    buchta_identity_check,
    conic_intrinsic_volumes,
    conic_profile,
    deficit_solid_angle,
    grassmann_angle,
    project_onto_cone,
    solid_angle,
)
from .errors import ConeHullError, ConfigError
from .estimate import Estimate
from .functionals import (
    estimate_B,
    estimate_cone_section_f_vector,
    estimate_cone_section_limit,
    estimate_f_vector_poisson,
    estimate_intrinsic_volume,
    estimate_T,
    estimate_volume,
    run_replicates,
)
from .geometry import Hull, convex_hull, f_vector, hull_volume
from .harness import ExperimentConfig, Report, load_config, run, verify_all
from .nnls import nnls
from .rng import make_rng, master_seed, replicate_rng
from .samplers import (
    ConeSample,
    PoissonParams,
    PoissonSample,
    sample_cauchy_type,
    sample_cone,
    sample_halfsphere,
    sample_poisson_hull,
    sample_symmetric_hull,
)

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "ConeHullError",
    "ConeSample",
    "ConfigError",
    "ConicProfile",
    "Estimate",
    "ExperimentConfig",
    "Hull",
    "PoissonParams",
    "PoissonSample",
    "Report",
    "buchta_identity_check",
    "closed_forms",
    "conic_intrinsic_volumes",
    "conic_profile",
    "convex_hull",
    "deficit_solid_angle",
    "estimate_B",
    "estimate_T",
    "estimate_cone_section_f_vector",
    "estimate_cone_section_limit",
    "estimate_f_vector_poisson",
    "estimate_intrinsic_volume",
    "estimate_volume",
    "f_vector",
    "grassmann_angle",
    "hull_volume",
    "load_config",
    "make_rng",
    "master_seed",
    "nnls",
    "project_onto_cone",
    "replicate_rng",
    "run",
    "run_replicates",
    "sample_cauchy_type",
    "sample_cone",
    "sample_halfsphere",
    "sample_poisson_hull",
    "sample_symmetric_hull",
    "solid_angle",
    "verify_all",
]
