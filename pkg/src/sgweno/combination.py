"""Prolongation onto the finest grid and the combination technique.

Prolongation runs dimension by dimension (x, then y, then z). Along a line
it uses either piecewise quadratic Lagrange interpolation on non-overlapping
two-cell windows or third-order WENO interpolation on the three-point stencil
around the nearest coarse node.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from sgweno.mesh import (
    CombinationIndexSet,
    GridFunction,
    LevelTuple,
    as_levels,
)
from sgweno.weno import DEFAULT_EPS


class ProlongationMethod(str, enum.Enum):
    LAGRANGE = "lagrange"
    WENO = "weno"


@dataclass(frozen=True)
class ProlongationKind:
    kind: ProlongationMethod = ProlongationMethod.LAGRANGE
    epsilon: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ProlongationMethod(self.kind))
        if self.kind is ProlongationMethod.WENO and not self.epsilon > 0:
            raise ValueError("WENO prolongation needs a positive epsilon")

    @classmethod
    def parse(cls, kind: ProlongationKind | str, epsilon: float = DEFAULT_EPS):
        if isinstance(kind, ProlongationKind):
            return kind
        return cls(ProlongationMethod(kind), epsilon)


def _check_alpha(alpha_tilde) -> None:
    a = np.asarray(alpha_tilde)
    if np.any(a < 0.5) or np.any(a >= 1.5):
        raise ValueError("alpha_tilde must lie in [0.5, 1.5)")


def _weno_interpolate(u_im1, u_i, u_ip1, alpha_tilde, eps):
    p1 = alpha_tilde * u_i - (alpha_tilde - 1.0) * u_im1
    p2 = (alpha_tilde - 1.0) * u_ip1 - (alpha_tilde - 2.0) * u_i
    beta1 = (u_i - u_im1) ** 2
    beta2 = (u_ip1 - u_i) ** 2
    # w1 = g1/(e+b1)^2 / (g1/(e+b1)^2 + g2/(e+b2)^2), cleared of denominators
    s1 = (1.0 - 0.5 * alpha_tilde) * (eps + beta2) ** 2
    s2 = 0.5 * alpha_tilde * (eps + beta1) ** 2
    w1 = s1 / (s1 + s2)
    # blended as p2 + w1 (p1 - p2) so that alpha_tilde = 1 returns u_i bitwise
    return p2 + w1 * (p1 - p2)


def weno_interpolate(u_im1, u_i, u_ip1, alpha_tilde, eps: float = DEFAULT_EPS):
    """Third-order WENO interpolation at ``x = x_{i-1} + alpha_tilde * h``."""
    _check_alpha(alpha_tilde)
    if not eps > 0:
        raise ValueError("eps must be positive")
    return _weno_interpolate(u_im1, u_i, u_ip1, alpha_tilde, eps)


def _check_factor(refine_factor: int) -> int:
    r = int(refine_factor)
    if r < 1 or r & (r - 1):
        raise ValueError(f"refine factor must be a power of two, got {refine_factor}")
    return r


def lagrange_prolong_line(coarse, refine_factor: int, axis: int = -1) -> np.ndarray:
    """Periodic piecewise-quadratic prolongation along ``axis``.

    The coarse line is tiled by windows of nodes ``(2m, 2m+1, 2m+2)``; the
    quadratic through each window is evaluated at the fine nodes in
    ``[x_{2m}, x_{2m+2})``.
    """
    coarse = np.asarray(coarse, dtype=np.float64)
    r = _check_factor(refine_factor)
    if r == 1:
        return coarse.copy()
    n = coarse.shape[axis]
    if n % 2:
        raise ValueError(f"Lagrange prolongation needs an even cell count, got {n}")
    x = np.arange(n * r) / r
    window = np.floor(x / 2).astype(np.intp)
    t = x - 2 * window
    l0 = 0.5 * (t - 1.0) * (t - 2.0)
    l1 = -t * (t - 2.0)
    l2 = 0.5 * t * (t - 1.0)
    i0 = 2 * window
    v = np.moveaxis(coarse, axis, -1)
    out = (
        v[..., i0] * l0
        + v[..., (i0 + 1) % n] * l1
        + v[..., (i0 + 2) % n] * l2
    )
    return np.moveaxis(out, -1, axis)


def weno_prolong_line(
    coarse, refine_factor: int, eps: float = DEFAULT_EPS, axis: int = -1
) -> np.ndarray:
    """Periodic WENO prolongation along ``axis``.

    Each fine node is interpolated from the stencil centred on the coarse node
    whose half-open cell ``[x_{i-1/2}, x_{i+1/2})`` contains it.
    """
    coarse = np.asarray(coarse, dtype=np.float64)
    r = _check_factor(refine_factor)
    if not eps > 0:
        raise ValueError("eps must be positive")
    if r == 1:
        return coarse.copy()
    n = coarse.shape[axis]
    x = np.arange(n * r) / r
    centre = np.floor(x + 0.5).astype(np.intp)
    alpha = x - centre + 1.0
    v = np.moveaxis(coarse, axis, -1)
    out = _weno_interpolate(
        v[..., (centre - 1) % n], v[..., centre % n], v[..., (centre + 1) % n],
        alpha, eps,
    )
    return np.moveaxis(out, -1, axis)


def prolong(
    u: GridFunction,
    target_levels: LevelTuple | Sequence[int],
    kind: ProlongationKind | str = ProlongationKind(),
) -> GridFunction:
    """Prolong ``u`` to ``target_levels``, one axis at a time in x, y, z order."""
    target = as_levels(target_levels)
    kind = ProlongationKind.parse(kind)
    if len(target) != u.spec.dim:
        raise ValueError("target levels do not match the grid dimension")
    gaps = [t - s for t, s in zip(target, u.levels)]
    if any(g < 0 for g in gaps):
        raise ValueError(f"target {target} is coarser than source {u.levels}")
    values = u.values
    for axis, gap in enumerate(gaps):
        if gap == 0:
            continue
        if kind.kind is ProlongationMethod.LAGRANGE:
            values = lagrange_prolong_line(values, 2**gap, axis=axis)
        else:
            values = weno_prolong_line(values, 2**gap, kind.epsilon, axis=axis)
    return GridFunction(u.spec.with_levels(target), values)


def combine(
    solutions: Iterable[tuple[LevelTuple | Sequence[int], GridFunction]],
    index_set: CombinationIndexSet,
    kind: ProlongationKind | str = ProlongationKind(),
) -> GridFunction:
    """Signed sum of the prolonged component solutions on the finest grid."""
    by_levels: dict[LevelTuple, GridFunction] = {}
    for levels, u in solutions:
        levels = as_levels(levels)
        if levels in by_levels:
            raise ValueError(f"duplicate component solution for levels {levels}")
        if u.levels != levels:
            raise ValueError(f"solution labelled {levels} lives on {u.levels}")
        by_levels[levels] = u
    wanted = set(index_set.levels())
    extra = set(by_levels) - wanted
    if extra:
        raise ValueError(f"levels not in the index set: {sorted(map(str, extra))}")
    missing = wanted - set(by_levels)
    if missing:
        raise ValueError(f"missing component solutions: {sorted(map(str, missing))}")

    finest = LevelTuple((index_set.finest_level,) * index_set.dim)
    acc = None
    spec = None
    for levels, coeff in index_set:
        fine = prolong(by_levels[levels], finest, kind)
        term = np.longdouble(coeff) * fine.values.astype(np.longdouble)
        acc = term if acc is None else acc + term
        spec = fine.spec
    return GridFunction(spec, acc.astype(np.float64))


def count_points_sparse(dim: int, root_cells: int, finest_level: int) -> int:
    """Grid points used by the time evolution of a sparse-grid run.

    Each axis counts ``root_cells * 2**l + 1`` nodes; points touched only by
    the final prolongation are not included.
    """

    def n(level: int) -> int:
        return root_cells * 2**level + 1

    if dim == 2:
        return sum(
            n(i) * n(finest_level - off - i)
            for off in (0, 1)
            for i in range(finest_level - off + 1)
        )
    if dim == 3:
        return sum(
            n(i) * n(j) * n(finest_level - off - i - j)
            for off in (0, 1, 2)
            for i in range(finest_level - off + 1)
            for j in range(finest_level - off - i + 1)
        )
    raise ValueError(f"unsupported dimension: {dim}")


def count_points_single(dim: int, root_cells: int, finest_level: int) -> int:
    return (root_cells * 2**finest_level + 1) ** dim
