"""Single-grid and sparse-grid drivers.

A sparse-grid run restricts the initial condition to every grid of the
combination index set, marches each one to the final time with a shared
step sequence, then prolongs and combines the results on the finest grid.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from sgweno.combination import ProlongationKind, combine
from sgweno.mesh import GridFunction, GridSpec, LevelTuple, build_index_set, restrict_function
from sgweno.problems import ProblemSpec
from sgweno.timestepping import (
    ProgressCallback,
    dt_sequence_for,
    evolve,
    evolve_lockstep,
)
from sgweno.weno import DEFAULT_EPS, SchemeVariant

logger = logging.getLogger(__name__)


@dataclass
class SparseResult:
    combined: GridFunction
    components: dict[LevelTuple, GridFunction]
    dt_sequence: Optional[list[float]]


def finest_spec(problem: ProblemSpec, root_cells: int, finest_level: int) -> GridSpec:
    return GridSpec(problem.domain, root_cells, (finest_level,) * problem.dim)


def solve_single(
    problem: ProblemSpec,
    root_cells: int,
    finest_level: int,
    t_final: float,
    cfl: float,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
    callback: Optional[ProgressCallback] = None,
) -> GridFunction:
    """Evolve on the full grid with ``root_cells * 2**finest_level`` cells per axis."""
    spec = finest_spec(problem, root_cells, finest_level)
    u0 = restrict_function(problem.initial, spec)
    dts = dt_sequence_for([u0], problem, cfl, min(spec.spacing), t_final)
    return evolve(u0, problem, None, t_final, eps, variant, callback, dt_sequence=dts)


def solve_sparse(
    problem: ProblemSpec,
    root_cells: int,
    finest_level: int,
    t_final: float,
    cfl: float,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
    prolongation: ProlongationKind | str = "lagrange",
    threads: int = 1,
    refresh_dt: bool = False,
    callback: Optional[ProgressCallback] = None,
) -> SparseResult:
    index_set = build_index_set(problem.dim, finest_level)
    prolongation = ProlongationKind.parse(prolongation, eps)
    finest = finest_spec(problem, root_cells, finest_level)
    h = min(finest.spacing)

    initial = {
        levels: restrict_function(problem.initial, finest.with_levels(levels))
        for levels in index_set.levels()
    }

    if refresh_dt:
        dts = None
        evolved = evolve_lockstep(
            list(initial.values()), problem, cfl, h, t_final, eps, variant, callback
        )
        components = dict(zip(initial, evolved))
    else:
        dts = dt_sequence_for(list(initial.values()), problem, cfl, h, t_final)
        logger.debug("shared dt sequence: %d steps, dt=%s", len(dts), dts[:1])

        def run(levels: LevelTuple) -> GridFunction:
            # progress is reported for the first component only
            cb = callback if levels == index_set.levels()[0] else None
            return evolve(
                initial[levels], problem, None, t_final, eps, variant, cb,
                dt_sequence=dts,
            )

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, initial))
        else:
            results = [run(levels) for levels in initial]
        components = dict(zip(initial, results))

    combined = combine(components.items(), index_set, prolongation)
    return SparseResult(combined, components, dts)
