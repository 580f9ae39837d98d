"""End-to-end acceptance checks against reference error levels.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary. Run with ``pytest -m acceptance``.
"""

import time

import numpy as np
import pytest

from sgweno.combination import (
    count_points_single,
    count_points_sparse,
    weno_interpolate,
    weno_prolong_line,
    combine,
)
from sgweno.harness import diagonal_cut, error_norms, observed_order, total_variation
from sgweno.mesh import DomainBox, GridFunction, GridSpec, build_index_set, restrict_function
from sgweno.problems import SHOCK_TIME, catalog_lookup
from sgweno.solver import solve_single, solve_sparse
from sgweno.timestepping import ssp_rk3_step
from sgweno.weno import rhs, weno_weights

pytestmark = pytest.mark.acceptance


def _linf(u, p, t):
    return error_norms(u, p.exact, t)[0]


def _fmt(values):
    return ", ".join(f"{v:.3g}" for v in values)


def test_1_burgers_source_2d_linear_single(verdict):
    p = catalog_lookup("burgers_source_2d")
    ref = [6.95e-5, 8.69e-6, 1.09e-6]
    errs = [_linf(solve_single(p, nr, 3, 1.0, 0.5, variant="linear"), p, 1.0) for nr in (10, 20, 40)]
    orders = [observed_order(a, b) for a, b in zip(errs, errs[1:])]
    ok = all(abs(e / r - 1) <= 0.2 for e, r in zip(errs, ref)) and all(
        abs(o - 3.0) <= 0.15 for o in orders
    )
    verdict("1 burgers_source_2d linear single 80/160/320", ok,
            f"Linf [{_fmt(errs)}] vs [{_fmt(ref)}] +-20%, orders [{_fmt(orders)}] in 3+-0.15")


def test_2_burgers_source_2d_weno_sparse(verdict):
    p = catalog_lookup("burgers_source_2d")
    errs = [
        _linf(solve_sparse(p, nr, 3, 1.0, 0.5, p.eps, "weno", "lagrange").combined, p, 1.0)
        for nr in (10, 20, 40)
    ]
    orders = [observed_order(a, b) for a, b in zip(errs, errs[1:])]
    ok = (
        errs[0] > errs[1] > errs[2]
        and orders[1] > 1
        and orders[-1] >= 5
        and 1.17e-5 / 3 <= errs[-1] <= 3 * 1.17e-5
    )
    verdict("2 burgers_source_2d WENO sparse N_L=3", ok,
            f"Linf [{_fmt(errs)}], orders [{_fmt(orders)}] (need >=5), final vs 1.17e-5 x3")


def test_3_linear3d_linear(verdict):
    p = catalog_lookup("linear3d")
    single = _linf(solve_single(p, 10, 3, 1.0, 0.75, variant="linear"), p, 1.0)
    sparse = _linf(solve_sparse(p, 10, 3, 1.0, 0.75, variant="linear").combined, p, 1.0)
    ok = abs(single / 2.30e-4 - 1) <= 0.2 and 7.16e-4 / 2 <= sparse <= 2 * 7.16e-4
    verdict("3 linear3d linear 80^3", ok,
            f"single {single:.3g} vs 2.30e-4 +-20%, sparse {sparse:.3g} vs 7.16e-4 x2")


def test_4_grid_point_counts(verdict):
    got = [
        count_points_sparse(2, 10, 3), count_points_sparse(2, 20, 2),
        count_points_sparse(3, 10, 3), count_points_sparse(3, 20, 2),
        count_points_single(2, 10, 3), count_points_single(3, 10, 3),
    ]
    want = [4847, 6805, 132549, 276570, 6561, 531441]
    verdict("4 grid-point counts", got == want, f"{got} == {want}")


def test_5_burgers2d_smooth_weno_sparse(verdict):
    p = catalog_lookup("burgers2d")
    t = p.t_final
    errs = [
        _linf(solve_sparse(p, nr, 2, t, p.cfl, p.eps, "weno", "weno").combined, p, t)
        for nr in (20, 40, 80, 160)
    ]
    orders = [observed_order(a, b) for a, b in zip(errs, errs[1:])]
    ok = orders[-2] >= 5 and 1.44e-8 / 3 <= errs[-1] <= 3 * 1.44e-8
    verdict("5 burgers2d smooth WENO sparse N_L=2", ok,
            f"Linf [{_fmt(errs)}], orders [{_fmt(orders)}] (320^2 >=5), 640^2 vs 1.44e-8 x3")


def _gradient_norm(u):
    g2 = 0.0
    for axis, h in enumerate(u.spec.spacing):
        d = (np.roll(u.values, -1, axis) - np.roll(u.values, 1, axis)) / (2 * h)
        g2 = g2 + d * d
    return np.sqrt(g2)


def test_6_burgers2d_shock(verdict):
    p = catalog_lookup("burgers2d")
    t = SHOCK_TIME
    sparse = solve_sparse(p, 40, 3, t, p.cfl, p.eps, "weno", "weno").combined
    single = solve_single(p, 40, 3, t, p.cfl, p.eps, "weno")
    u0 = restrict_function(p.initial, sparse.spec)
    lo, hi = float(sparse.values.min()), float(sparse.values.max())
    tv0 = total_variation(diagonal_cut(u0)[1])
    tv = total_variation(diagonal_cut(sparse)[1])
    smooth = _gradient_norm(single) < 1.0
    diff = float(np.max(np.abs(sparse.values - single.values)[smooth]))
    ok = lo >= -0.41 and hi <= 1.01 and tv <= tv0 + 0.05 and diff <= 0.05
    verdict("6 burgers2d through the shock", ok,
            f"range [{lo:.4f}, {hi:.4f}] in [-0.41, 1.01], cut TV {tv:.4f} <= {tv0:.4f}+0.05, "
            f"smooth-region diff {diff:.3g} <= 0.05 ({smooth.mean():.0%} of nodes)")


def test_7_burgers_source_3d_sparse_faster(verdict):
    p = catalog_lookup("burgers_source_3d")
    start = time.perf_counter()
    solve_single(p, 10, 3, 1.0, p.cfl, variant="linear")
    t_single = time.perf_counter() - start
    start = time.perf_counter()
    solve_sparse(p, 10, 3, 1.0, p.cfl, variant="linear")
    t_sparse = time.perf_counter() - start
    ratio = count_points_sparse(3, 10, 3) / count_points_single(3, 10, 3)
    ok = t_sparse < t_single and round(ratio, 2) == 0.25
    verdict("7 burgers_source_3d sparse vs single cost", ok,
            f"wall {t_sparse:.2f}s < {t_single:.2f}s, point ratio {ratio:.4f} -> 0.25")


def test_8_property_suite(verdict):
    rng = np.random.default_rng(7)
    checks = {}

    a, b, c = rng.normal(size=(3, 1000)) * 10
    w = weno_weights(a, b, c)
    checks["weights sum to 1"] = float(np.max(np.abs(w.w0 + w.w1 - 1))) <= 1e-14

    p = catalog_lookup("burgers2d")
    spec = GridSpec(p.domain, 16, (1, 0))
    u = GridFunction(spec, rng.uniform(-1, 1, spec.shape))
    checks["rhs conserves"] = abs(float(np.sum(rhs(u, p).values))) <= 1e-12 * spec.size

    iset = build_index_set(3, 3)
    gspec = GridSpec(DomainBox.cube(0.0, 1.0, 3), 2, (0, 0, 0))
    comps = [(lv, GridFunction(gspec.with_levels(lv), np.full(gspec.with_levels(lv).shape, 0.375)))
             for lv in iset.levels()]
    checks["combine keeps constants"] = bool(np.all(combine(comps, iset, "weno").values == 0.375)) and bool(
        np.all(combine(comps, iset, "lagrange").values == 0.375)
    )

    v = rng.normal(size=(3, 100))
    checks["interpolation at node"] = bool(np.all(weno_interpolate(v[0], v[1], v[2], 1.0) == v[1]))

    step = np.r_[np.zeros(10), np.ones(10)]
    fine = weno_prolong_line(step, 4, eps=1e-6)
    checks["no overshoot at steps"] = fine.min() >= -1e-9 and fine.max() <= 1 + 1e-9

    checks["RK3 amplification"] = abs(ssp_rk3_step(1.0, 0.1, lambda x: -x) - 0.9048333333333333) <= 1e-12

    failed = [k for k, ok in checks.items() if not ok]
    verdict("8 property suite", not failed,
            f"{len(checks) - len(failed)}/{len(checks)} hold" + (f"; failed: {failed}" if failed else ""))
