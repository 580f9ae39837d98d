"""Catalog of periodic scalar test problems.

Each entry bundles a flux per axis (with its derivative), a pointwise source
term, the initial condition and, where one is known, the exact solution.
The Burgers problems with ``0.3 + 0.7 sin`` data only have an implicit exact
solution (solved along characteristics) that is valid up to shock formation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from sgweno.mesh import DomainBox

Array = np.ndarray
PointFunction = Callable[..., Array]


@dataclass(frozen=True)
class Flux:
    name: str
    f: Callable[[Array], Array]
    df: Callable[[Array], Array]


def _linear_f(u):
    return u


def _linear_df(u):
    return np.ones_like(u)


def _burgers_f(u):
    return 0.5 * u * u


def _burgers_df(u):
    return u


LINEAR = Flux("linear", _linear_f, _linear_df)
BURGERS = Flux("burgers", _burgers_f, _burgers_df)


def linear_damping(rate: float) -> Callable[[Array], Array]:
    def source(u):
        return -rate * u

    return source


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    domain: DomainBox
    fluxes: tuple[Flux, ...]
    initial: PointFunction
    source: Optional[Callable[[Array], Array]] = None
    exact: Optional[Callable[..., Array]] = None
    t_final: float = 1.0
    cfl: float = 0.5
    eps: float = 1.0e-2
    shock_time: Optional[float] = None
    notes: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.fluxes) != self.domain.dim:
            raise ValueError("one flux per axis is required")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def boundary(self) -> str:
        return "periodic"

    def exact_at(self, t: float) -> PointFunction:
        if self.exact is None:
            raise ValueError(f"problem {self.name!r} has no exact solution")
        exact = self.exact

        def f(*x):
            return exact(*x, t=t)

        return f


# {{{ exact solutions


def _burgers_diagonal_exact(dim: int, mean: float, amp: float, k: float):
    """Exact solution of ``u_t + sum_k (u^2/2)_{x_k} = 0`` for data
    ``mean + amp*sin(k*s)`` with ``s = x_1 + ... + x_d``.

    Along ``s`` the equation is ``v_t + d v v_s = 0`` so ``v = v0(s - d v t)``.
    Valid before characteristics cross, i.e. for ``t < 1 / (d * amp * k)``.
    """

    def v0(s):
        return mean + amp * np.sin(k * s)

    def dv0(s):
        return amp * k * np.cos(k * s)

    def exact(*x, t: float):
        s = sum(np.asarray(xi, dtype=np.float64) for xi in x)
        s = np.broadcast_to(s, np.broadcast_shapes(*(np.shape(xi) for xi in x)))
        if t == 0:
            return v0(s)
        if t >= 1.0 / (dim * amp * k):
            raise ValueError("characteristics have crossed; no smooth solution")
        v = v0(s)
        for _ in range(100):
            xi = s - dim * v * t
            g = v - v0(xi)
            dg = 1.0 + dim * t * dv0(xi)
            step = g / dg
            v = v - step
            if np.max(np.abs(step)) < 1e-15:
                break
        return v

    return exact


def _linear3d_initial(x, y, z):
    return np.sin(0.5 * np.pi * (x + y + z))


def _linear3d_exact(x, y, z, t):
    return np.sin(0.5 * np.pi * (x + y + z - 3.0 * t))


def _damped2d_initial(x, y):
    return np.sin(x - y)


def _damped2d_exact(x, y, t):
    return np.exp(-0.1 * t) * np.sin(x - y)


def _damped3d_initial(x, y, z):
    return np.sin(x - 0.5 * y - 0.5 * z)


def _damped3d_exact(x, y, z, t):
    return np.exp(-0.1 * t) * np.sin(x - 0.5 * y - 0.5 * z)


def _burgers2d_initial(x, y):
    return 0.3 + 0.7 * np.sin(0.5 * np.pi * (x + y))


def _burgers3d_initial(x, y, z):
    return 0.3 + 0.7 * np.sin(np.pi / 3.0 * (x + y + z))


# }}}


SMOOTH_TIME = 0.5 / np.pi**2
SHOCK_TIME = 5.0 / np.pi**2


def _build_catalog() -> dict[str, ProblemSpec]:
    damping = linear_damping(0.1)
    return {
        "linear3d": ProblemSpec(
            name="linear3d",
            domain=DomainBox.cube(-2.0, 2.0, 3),
            fluxes=(LINEAR,) * 3,
            initial=_linear3d_initial,
            exact=_linear3d_exact,
            t_final=1.0,
            cfl=0.75,
        ),
        "burgers_source_2d": ProblemSpec(
            name="burgers_source_2d",
            domain=DomainBox.cube(0.0, 2.0 * np.pi, 2),
            fluxes=(BURGERS,) * 2,
            initial=_damped2d_initial,
            source=damping,
            exact=_damped2d_exact,
            t_final=1.0,
            cfl=0.5,
        ),
        "burgers_source_3d": ProblemSpec(
            name="burgers_source_3d",
            domain=DomainBox.cube(0.0, 4.0 * np.pi, 3),
            fluxes=(BURGERS,) * 3,
            initial=_damped3d_initial,
            source=damping,
            exact=_damped3d_exact,
            t_final=1.0,
            cfl=0.75,
        ),
        "burgers2d": ProblemSpec(
            name="burgers2d",
            domain=DomainBox.cube(-2.0, 2.0, 2),
            fluxes=(BURGERS,) * 2,
            initial=_burgers2d_initial,
            exact=_burgers_diagonal_exact(2, 0.3, 0.7, 0.5 * np.pi),
            t_final=SMOOTH_TIME,
            cfl=0.5,
            eps=1.0e-3,
            shock_time=SHOCK_TIME,
            notes="exact solution valid for t < 1/(0.7*pi)",
        ),
        "burgers3d": ProblemSpec(
            name="burgers3d",
            domain=DomainBox.cube(-3.0, 3.0, 3),
            fluxes=(BURGERS,) * 3,
            initial=_burgers3d_initial,
            exact=_burgers_diagonal_exact(3, 0.3, 0.7, np.pi / 3.0),
            t_final=SMOOTH_TIME,
            cfl=0.75,
            shock_time=SHOCK_TIME,
            notes="exact solution valid for t < 1/(0.7*pi)",
        ),
    }


CATALOG = _build_catalog()


def catalog_lookup(name: str) -> ProblemSpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(
            f"unknown problem {name!r}; choose from {', '.join(sorted(CATALOG))}"
        ) from None


def problem_names() -> list[str]:
    return sorted(CATALOG)
