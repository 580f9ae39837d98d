"""Third-order finite-difference WENO spatial operator.

Fluxes are split with a global Lax-Friedrichs splitting per axis and
reconstructed at the half nodes ``x_{i+1/2}`` from three-point stencils. All
the pointwise helpers accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sgweno.mesh import GridFunction
from sgweno.problems import ProblemSpec

#: linear weights (d0, d1) of the two-point substencils
D0 = 2.0 / 3.0
D1 = 1.0 / 3.0

DEFAULT_EPS = 1.0e-2


class SchemeVariant(str, enum.Enum):
    LINEAR = "linear"
    WENO = "weno"


def as_variant(variant: SchemeVariant | str) -> SchemeVariant:
    return SchemeVariant(variant)


class FluxSplitPair(NamedTuple):
    plus: np.ndarray | float
    minus: np.ndarray | float


@dataclass(frozen=True)
class WenoWeights:
    w0: np.ndarray | float
    w1: np.ndarray | float
    beta0: np.ndarray | float
    beta1: np.ndarray | float
    epsilon: float


def weno_weights(f_im1, f_i, f_ip1, eps: float = DEFAULT_EPS) -> WenoWeights:
    """Nonlinear weights for the left-biased reconstruction at ``i+1/2``.

    ``w0 = a0 / (a0 + a1)`` with ``a_r = d_r / (eps + beta_r)**2``, evaluated
    after multiplying through by ``(eps + beta0)**2 (eps + beta1)**2`` so that
    a vanishing indicator never overflows.
    """
    beta0 = (f_ip1 - f_i) ** 2
    beta1 = (f_i - f_im1) ** 2
    s0 = D0 * (eps + beta1) ** 2
    s1 = D1 * (eps + beta0) ** 2
    w0 = s0 / (s0 + s1)
    return WenoWeights(w0, 1.0 - w0, beta0, beta1, eps)


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


def weno_flux_positive(
    f_im1, f_i, f_ip1,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
):
    """Reconstruct ``f_{i+1/2}`` from ``f_{i-1}, f_i, f_{i+1}`` (positive wind)."""
    _check_eps(eps)
    central = 0.5 * (f_i + f_ip1)
    upwind = 0.5 * (3.0 * f_i - f_im1)
    if as_variant(variant) is SchemeVariant.LINEAR:
        return D0 * central + D1 * upwind
    w = weno_weights(f_im1, f_i, f_ip1, eps)
    return w.w0 * central + w.w1 * upwind


def weno_flux_negative(
    f_i, f_ip1, f_ip2,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
):
    """Reconstruct ``f_{i+1/2}`` from ``f_i, f_{i+1}, f_{i+2}`` (negative wind).

    Mirror image of :func:`weno_flux_positive` about ``x_{i+1/2}``.
    """
    return weno_flux_positive(f_ip2, f_ip1, f_i, eps, variant)


def lax_friedrichs_split(f_of_u, u, alpha: float) -> FluxSplitPair:
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return FluxSplitPair(0.5 * (f_of_u + alpha * u), 0.5 * (f_of_u - alpha * u))


def max_wavespeed(u: GridFunction | np.ndarray, problem: ProblemSpec, axis: int) -> float:
    values = u.values if isinstance(u, GridFunction) else np.asarray(u)
    if values.size == 0:
        raise ValueError("cannot take a wavespeed over an empty grid")
    return float(np.max(np.abs(problem.fluxes[axis].df(values))))


def _interface_fluxes(values, flux, axis, eps, variant, alpha):
    """Fluxes at ``i+1/2`` for ``i = -1, ..., n-1`` (``n+1`` interfaces)."""
    n = values.shape[axis]
    padded = np.concatenate(
        [np.take(values, [n - 2, n - 1], axis=axis), values,
         np.take(values, [0, 1], axis=axis)],
        axis=axis,
    )
    fp, fm = lax_friedrichs_split(flux.f(padded), padded, alpha)

    def window(a, lo):
        idx = [slice(None)] * a.ndim
        idx[axis] = slice(lo, lo + n + 1)
        return a[tuple(idx)]

    # padded index p holds node p-2, so interface i+1/2 starts at i = -1 -> p = 1
    plus = weno_flux_positive(window(fp, 0), window(fp, 1), window(fp, 2), eps, variant)
    minus = weno_flux_negative(window(fm, 1), window(fm, 2), window(fm, 3), eps, variant)
    return plus + minus


def numerical_flux(
    values: np.ndarray,
    problem: ProblemSpec,
    axis: int,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
    alpha: float | None = None,
) -> np.ndarray:
    """Numerical flux at ``i+1/2`` along ``axis`` for every stored node ``i``.

    ``alpha`` defaults to the global wavespeed of ``values`` along the axis.
    """
    if alpha is None:
        alpha = max_wavespeed(values, problem, axis)
    fhat = _interface_fluxes(values, problem.fluxes[axis], axis, eps, variant, alpha)
    return np.delete(fhat, 0, axis=axis)


def rhs(
    u: GridFunction,
    problem: ProblemSpec,
    eps: float = DEFAULT_EPS,
    variant: SchemeVariant | str = SchemeVariant.WENO,
) -> GridFunction:
    """Semi-discrete operator ``-div f(u) + S(u)`` on the grid of ``u``.

    Periodic wrapping uses two ghost layers per side copied from the far end.
    """
    if u.spec.dim != problem.dim:
        raise ValueError(
            f"{u.spec.dim}D grid function for a {problem.dim}D problem"
        )
    values = u.values
    out = np.zeros_like(values)
    for axis, h in enumerate(u.spec.spacing):
        alpha = max_wavespeed(values, problem, axis)
        fhat = _interface_fluxes(values, problem.fluxes[axis], axis, eps, variant, alpha)
        out -= np.diff(fhat, axis=axis) / h
    if problem.source is not None:
        out += problem.source(values)
    return GridFunction(u.spec, out)
