"""SSP-RK3 time marching with the sparse-grid time-step rule.

Every component grid of a sparse-grid run advances with the same step sizes,
computed from the mesh size of the finest grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from sgweno.mesh import GridFunction
from sgweno.problems import ProblemSpec
from sgweno.weno import DEFAULT_EPS, SchemeVariant, max_wavespeed, rhs

ProgressCallback = Callable[[int, float, float], None]


class BlowUpError(RuntimeError):
    def __init__(self, step: int, t: float):
        super().__init__(f"non-finite values after step {step} (t={t:.6g})")
        self.step = step
        self.t = t


@dataclass(frozen=True)
class TimeStepPolicy:
    cfl: float
    finest_h: float
    wavespeeds: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.cfl > 0:
            raise ValueError("cfl must be positive")
        if not self.finest_h > 0:
            raise ValueError("finest_h must be positive")
        if any(a < 0 for a in self.wavespeeds):
            raise ValueError("wavespeeds must be non-negative")

    def with_wavespeeds(self, wavespeeds: Sequence[float]) -> TimeStepPolicy:
        return TimeStepPolicy(self.cfl, self.finest_h, tuple(float(a) for a in wavespeeds))


def compute_dt(policy: TimeStepPolicy, dim: Optional[int] = None) -> float:
    """``dt = cfl / sum_k(alpha_k / h)`` on the finest mesh size ``h``."""
    speeds = policy.wavespeeds
    if dim is not None and len(speeds) != dim:
        raise ValueError(f"{len(speeds)} wavespeeds for a {dim}D problem")
    rate = sum(a / policy.finest_h for a in speeds)
    if rate == 0:
        raise ValueError("all wavespeeds are zero; no characteristic time scale")
    return policy.cfl / rate


def step_sizes(t_final: float, dt: float) -> list[float]:
    """Constant steps of ``dt`` with the last one truncated to land on ``t_final``."""
    if t_final < 0:
        raise ValueError("final time must be non-negative")
    if t_final == 0:
        return []
    n = max(1, math.ceil(t_final / dt - 1e-10))
    return [dt] * (n - 1) + [t_final - (n - 1) * dt]


def initial_wavespeeds(
    states: Sequence[GridFunction], problem: ProblemSpec
) -> tuple[float, ...]:
    """Per-axis wavespeed bound over the union of ``states``."""
    return tuple(
        max(max_wavespeed(u, problem, k) for u in states) for k in range(problem.dim)
    )


def ssp_rk3_step(u, dt: float, rhs_op):
    """One Shu-Osher SSP-RK3 step.

    ``u`` is a :class:`GridFunction` (with ``rhs_op`` mapping grid functions to
    grid functions) or anything supporting array arithmetic.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if isinstance(u, GridFunction):
        spec = u.spec

        def op(v):
            return rhs_op(GridFunction(spec, v)).values

        return GridFunction(spec, _ssp_rk3(u.values, dt, op))
    return _ssp_rk3(u, dt, rhs_op)


def _ssp_rk3(u, dt, op):
    u1 = u + dt * op(u)
    u2 = 0.75 * u + 0.25 * (u1 + dt * op(u1))
    return u / 3.0 + 2.0 / 3.0 * (u2 + dt * op(u2))


def _rhs_operator(problem, eps, variant):
    def op(v: GridFunction) -> GridFunction:
        # overflow surfaces as a BlowUpError after the step
        with np.errstate(over="ignore", invalid="ignore"):
            return rhs(v, problem, eps, variant)

    return op


def evolve(
    u0: GridFunction,
    problem: ProblemSpec,
    policy: TimeStepPolicy,
    t_final: float,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
    callback: Optional[ProgressCallback] = None,
    dt_sequence: Optional[Sequence[float]] = None,
) -> GridFunction:
    """March ``u0`` to ``t_final`` with a frozen time step.

    ``dt_sequence`` overrides the steps derived from ``policy``; sparse-grid
    runs pass the same sequence to every component grid.
    """
    if dt_sequence is None:
        dt_sequence = step_sizes(t_final, compute_dt(policy, problem.dim))
    op = _rhs_operator(problem, eps, variant)
    u = u0
    t = 0.0
    for n, dt in enumerate(dt_sequence, start=1):
        u = ssp_rk3_step(u, dt, op)
        t += dt
        if not u.is_finite():
            raise BlowUpError(n, t)
        if callback is not None:
            callback(n, t, dt)
    return u


def dt_sequence_for(
    states: Sequence[GridFunction],
    problem: ProblemSpec,
    cfl: float,
    finest_h: float,
    t_final: float,
) -> list[float]:
    """Frozen step sequence shared by all component grids of one run."""
    if t_final == 0:
        return []
    policy = TimeStepPolicy(cfl, finest_h, initial_wavespeeds(states, problem))
    return step_sizes(t_final, compute_dt(policy, problem.dim))


def evolve_lockstep(
    states: Sequence[GridFunction],
    problem: ProblemSpec,
    cfl: float,
    finest_h: float,
    t_final: float,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
    callback: Optional[ProgressCallback] = None,
) -> list[GridFunction]:
    """March several grids together, refreshing ``dt`` every step.

    The wavespeed bound is taken over the union of all current states, so each
    step uses one ``dt`` on every grid.
    """
    op = _rhs_operator(problem, eps, variant)
    states = list(states)
    t = 0.0
    n = 0
    while t < t_final:
        policy = TimeStepPolicy(cfl, finest_h, initial_wavespeeds(states, problem))
        dt = compute_dt(policy, problem.dim)
        if t + dt >= t_final * (1 - 1e-12):
            dt = t_final - t
        states = [ssp_rk3_step(u, dt, op) for u in states]
        n += 1
        t = t_final if dt == t_final - t else t + dt
        if not all(u.is_finite() for u in states):
            raise BlowUpError(n, t)
        if callback is not None:
            callback(n, t, dt)
    return states

