"""Polar spaces over small fields, subspace complements, and reconstruction."""

from .algebra import GF, FieldElement, dot, normalize_point, pg_line, pg_points
from .complement import (
    Complement,
    PlaneRecord,
    build_complement,
    drop_proper_line,
    resolve_horizon,
)
from .errors import ConfigurationError, HorizonRefusal, IntegrityError, LemmaFalsified
from .incidence import IncidenceStructure, bits, mask_of
from .polar import (
    AxiomReport,
    FormSpec,
    PolarSpace,
    build_polar,
    check_polar_axioms,
    compute_rank,
    elliptic_form,
    hermitian_form,
    hyperbolic_form,
    parabolic_form,
    symplectic_form,
)
from .reconstruct import (
    ParallelClasses,
    Parallelism,
    ReconstructedStructure,
    canonical_map,
    intrinsic_affine_lines,
    parallel_closure,
    reconstruct,
    star_parallel,
)
from .verify import CheckResult, find_isomorphism, is_isomorphism, run_lemma_battery

__version__ = "0.1.0"

__all__ = [
    "GF",
    "FieldElement",
    "normalize_point",
    "pg_points",
    "pg_line",
    "dot",
    "IncidenceStructure",
    "bits",
    "mask_of",
    "FormSpec",
    "PolarSpace",
    "AxiomReport",
    "symplectic_form",
    "parabolic_form",
    "hyperbolic_form",
    "elliptic_form",
    "hermitian_form",
    "build_polar",
    "compute_rank",
    "check_polar_axioms",
    "Complement",
    "PlaneRecord",
    "build_complement",
    "drop_proper_line",
    "resolve_horizon",
    "Parallelism",
    "ParallelClasses",
    "ReconstructedStructure",
    "star_parallel",
    "parallel_closure",
    "intrinsic_affine_lines",
    "reconstruct",
    "canonical_map",
    "CheckResult",
    "is_isomorphism",
    "find_isomorphism",
    "run_lemma_battery",
    "ConfigurationError",
    "HorizonRefusal",
    "LemmaFalsified",
    "IntegrityError",
]
