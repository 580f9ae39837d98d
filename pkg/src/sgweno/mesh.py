"""Domain boxes, semi-coarsened grids, grid functions and combination index sets.

A semi-coarsened grid is refined independently along each axis from a root
grid with ``root_cells`` cells per axis: along axis ``k`` it has
``root_cells * 2**levels[k]`` cells. Every problem handled here is periodic,
so a grid function stores one value per cell (the right endpoint is the
left endpoint); reporting code uses the ``+1`` node convention instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class DomainBox:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same length")
        if self.dim not in (2, 3):
            raise ValueError(f"unsupported dimension: {self.dim}")
        for a, b in zip(self.lo, self.hi):
            if not b > a:
                raise ValueError(f"empty extent [{a}, {b}]")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def cube(cls, a: float, b: float, dim: int) -> DomainBox:
        return cls((a,) * dim, (b,) * dim)

    def extent(self, axis: int) -> float:
        return self.hi[axis] - self.lo[axis]


@dataclass(frozen=True, order=True)
class LevelTuple:
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))
        if any(v < 0 for v in self.levels):
            raise ValueError(f"negative refinement level in {self.levels}")

    def __iter__(self):
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, k: int) -> int:
        return self.levels[k]

    @property
    def total(self) -> int:
        return sum(self.levels)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.levels)


def as_levels(levels: LevelTuple | Sequence[int]) -> LevelTuple:
    return levels if isinstance(levels, LevelTuple) else LevelTuple(tuple(levels))


@dataclass(frozen=True)
class GridSpec:
    domain: DomainBox
    root_cells: int
    levels: LevelTuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", as_levels(self.levels))
        if self.root_cells < 1:
            raise ValueError("root_cells must be positive")
        if len(self.levels) != self.domain.dim:
            raise ValueError(
                f"{len(self.levels)} levels given for a {self.domain.dim}D domain"
            )

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def shape(self) -> tuple[int, ...]:
        """Stored values per axis (periodic, endpoint deduplicated)."""
        return tuple(self.root_cells * 2**lv for lv in self.levels)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def root_spacing(self) -> tuple[float, ...]:
        return tuple(
            self.domain.extent(k) / self.root_cells for k in range(self.dim)
        )

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(
            H * 2.0**-lv for H, lv in zip(self.root_spacing, self.levels)
        )

    def node_count(self) -> int:
        """Node count with both endpoints on every axis."""
        return int(np.prod([n + 1 for n in self.shape]))

    def with_levels(self, levels: LevelTuple | Sequence[int]) -> GridSpec:
        return GridSpec(self.domain, self.root_cells, as_levels(levels))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        n = self.shape[axis]
        return self.domain.lo[axis] + np.arange(n) * self.spacing[axis]

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays (``np.ix_`` style)."""
        return tuple(
            np.asarray(c)
            for c in np.ix_(*(self.axis_coordinates(k) for k in range(self.dim)))
        )


@dataclass
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.spec.shape:
            raise ValueError(
                f"values of shape {self.values.shape} do not fit grid {self.spec.shape}"
            )

    @property
    def levels(self) -> LevelTuple:
        return self.spec.levels

    def copy(self) -> GridFunction:
        return GridFunction(self.spec, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))


@dataclass(frozen=True)
class CombinationIndexSet:
    dim: int
    finest_level: int
    entries: tuple[tuple[LevelTuple, int], ...] = field(repr=False)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def levels(self) -> list[LevelTuple]:
        return [lv for lv, _ in self.entries]

    def coefficient(self, levels: LevelTuple | Sequence[int]) -> int:
        levels = as_levels(levels)
        for lv, c in self.entries:
            if lv == levels:
                return c
        raise KeyError(f"level tuple {levels} not in index set")


# layer offset below N_L -> combination coefficient
_LAYERS = {
    2: ((0, 1), (1, -1)),
    3: ((0, 1), (1, -2), (2, 1)),
}


def _tuples_with_sum(dim: int, total: int) -> list[tuple[int, ...]]:
    return [
        t
        for t in itertools.product(range(total + 1), repeat=dim)
        if sum(t) == total
    ]


def build_index_set(dim: int, finest_level: int) -> CombinationIndexSet:
    """Standard combination-technique index set for ``dim`` = 2 or 3."""
    if dim not in _LAYERS:
        raise ValueError(f"unsupported dimension: {dim}")
    layers = _LAYERS[dim]
    min_level = len(layers) - 1
    if finest_level < max(min_level, 1):
        raise ValueError(
            f"{dim}D combination needs finest level >= {max(min_level, 1)}, "
            f"got {finest_level}"
        )
    entries = []
    for offset, coeff in layers:
        for t in _tuples_with_sum(dim, finest_level - offset):
            entries.append((LevelTuple(t), coeff))
    entries.sort(key=lambda e: e[0].levels)
    return CombinationIndexSet(dim, finest_level, tuple(entries))


def node_coordinate(spec: GridSpec, index: Sequence[int]) -> tuple[float, ...]:
    if len(index) != spec.dim:
        raise IndexError(f"expected {spec.dim} indices, got {len(index)}")
    out = []
    for k, (i, n) in enumerate(zip(index, spec.shape)):
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range [0, {n}) on axis {k}")
        out.append(spec.domain.lo[k] + i * spec.spacing[k])
    return tuple(out)


def restrict_function(
    f: Callable[..., np.ndarray | float], spec: GridSpec
) -> GridFunction:
    """Sample ``f(x, y[, z])`` at the stored nodes of ``spec``.

    ``f`` is called once with broadcastable coordinate arrays.
    """
    values = np.broadcast_to(f(*spec.coordinates()), spec.shape)
    return GridFunction(spec, np.array(values, dtype=np.float64))
