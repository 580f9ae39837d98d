"""Third-order WENO on semi-coarsened sparse grids via the combination technique."""

from sgweno.combination import (
    ProlongationKind,
    ProlongationMethod,
    combine,
    count_points_single,
    count_points_sparse,
    lagrange_prolong_line,
    prolong,
    weno_interpolate,
    weno_prolong_line,
)
from sgweno.mesh import (
    CombinationIndexSet,
    DomainBox,
    GridFunction,
    GridSpec,
    LevelTuple,
    build_index_set,
    node_coordinate,
    restrict_function,
)
from sgweno.problems import ProblemSpec, catalog_lookup
from sgweno.timestepping import TimeStepPolicy, compute_dt, evolve, ssp_rk3_step
from sgweno.weno import (
    SchemeVariant,
    lax_friedrichs_split,
    max_wavespeed,
    rhs,
    weno_flux_negative,
    weno_flux_positive,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationIndexSet",
    "DomainBox",
    "GridFunction",
    "GridSpec",
    "LevelTuple",
    "ProblemSpec",
    "ProlongationKind",
    "ProlongationMethod",
    "SchemeVariant",
    "TimeStepPolicy",
    "build_index_set",
    "catalog_lookup",
    "combine",
    "compute_dt",
    "count_points_single",
    "count_points_sparse",
    "evolve",
    "lagrange_prolong_line",
    "lax_friedrichs_split",
    "max_wavespeed",
    "node_coordinate",
    "prolong",
    "restrict_function",
    "rhs",
    "ssp_rk3_step",
    "weno_flux_negative",
    "weno_flux_positive",
    "weno_interpolate",
    "weno_prolong_line",
]
