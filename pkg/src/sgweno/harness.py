"""Runs, convergence studies, error norms and CSV output."""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from sgweno.combination import ProlongationKind, count_points_single, count_points_sparse
from sgweno.mesh import GridFunction, restrict_function
from sgweno.problems import ProblemSpec, catalog_lookup
from sgweno.solver import solve_single, solve_sparse
from sgweno.timestepping import BlowUpError, ProgressCallback
from sgweno.weno import SchemeVariant

logger = logging.getLogger(__name__)

MODES = ("single", "sparse")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    problem: str
    mode: str = "sparse"
    scheme: str = "weno"
    prolongation: str = "lagrange"
    nr: int = 10
    nl: int = 3
    cfl: Optional[float] = None
    eps: Optional[float] = None
    tfinal: Optional[float] = None
    out: Optional[str] = None
    threads: int = 1

    def __post_init__(self) -> None:
        try:
            problem = catalog_lookup(self.problem)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        try:
            SchemeVariant(self.scheme)
            ProlongationKind.parse(self.prolongation)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.nr < 1:
            raise ConfigError("nr must be positive")
        min_nl = 1 if problem.dim == 2 else 2
        if self.mode == "sparse" and self.nl < min_nl:
            raise ConfigError(f"sparse mode in {problem.dim}D needs nl >= {min_nl}")
        if self.nl < 0:
            raise ConfigError("nl must be non-negative")
        if self.threads < 1:
            raise ConfigError("threads must be positive")

    @property
    def spec(self) -> ProblemSpec:
        return catalog_lookup(self.problem)

    @property
    def resolved_cfl(self) -> float:
        return self.spec.cfl if self.cfl is None else self.cfl

    @property
    def resolved_eps(self) -> float:
        return self.spec.eps if self.eps is None else self.eps

    @property
    def resolved_tfinal(self) -> float:
        return self.spec.t_final if self.tfinal is None else self.tfinal

    @property
    def finest_cells(self) -> int:
        return self.nr * 2**self.nl

    def mesh_label(self) -> str:
        return "x".join([str(self.finest_cells)] * self.spec.dim)

    def grid_points(self) -> int:
        if self.mode == "sparse":
            return count_points_sparse(self.spec.dim, self.nr, self.nl)
        return count_points_single(self.spec.dim, self.nr, self.nl)


@dataclass
class RunResult:
    config: RunConfig
    solution: Optional[GridFunction]
    seconds: float
    error: Optional[str] = None


def execute(config: RunConfig, callback: Optional[ProgressCallback] = None) -> RunResult:
    """Run one configuration; blow-ups are caught and reported in the result."""
    problem = config.spec
    kwargs = dict(
        t_final=config.resolved_tfinal,
        cfl=config.resolved_cfl,
        eps=config.resolved_eps,
        variant=config.scheme,
        callback=callback,
    )
    start = time.perf_counter()
    try:
        if config.mode == "single":
            u = solve_single(problem, config.nr, config.nl, **kwargs)
        else:
            u = solve_sparse(
                problem, config.nr, config.nl,
                prolongation=ProlongationKind.parse(config.prolongation, config.resolved_eps),
                threads=config.threads,
                **kwargs,
            ).combined
    except BlowUpError as exc:
        return RunResult(config, None, time.perf_counter() - start, str(exc))
    return RunResult(config, u, time.perf_counter() - start)


def error_norms(
    numeric: GridFunction, exact_fn: Optional[Callable[..., np.ndarray]], t: float
) -> tuple[float, float]:
    """Max-norm and root-mean-square error against ``exact_fn(x, ..., t=t)``."""
    if exact_fn is None:
        raise ValueError("no exact solution available")

    def at_t(*x):
        return exact_fn(*x, t=t)

    err = numeric.values - restrict_function(at_t, numeric.spec).values
    return float(np.max(np.abs(err))), float(np.sqrt(np.mean(err**2)))


def observed_order(err_coarse: float, err_fine: float) -> float:
    """``log2(err_coarse / err_fine)``; NaN when either error is not positive."""
    if not (err_coarse > 0 and err_fine > 0):
        return math.nan
    return math.log2(err_coarse / err_fine)


def _sig6(v: Optional[float]) -> Optional[float]:
    if v is None or not math.isfinite(v):
        return v
    return float(f"{v:.5e}")


@dataclass
class ReportRow:
    mesh: str
    mode: str
    nr: int
    nl: int
    linf: Optional[float]
    linf_order: Optional[float]
    l2: Optional[float]
    l2_order: Optional[float]
    seconds: float
    grid_points: int
    status: str = "ok"

    def __post_init__(self) -> None:
        for name in ("linf", "linf_order", "l2", "l2_order", "seconds"):
            setattr(self, name, _sig6(getattr(self, name)))


FLOAT_COLUMNS = ("linf", "linf_order", "l2", "l2_order", "seconds")
INT_COLUMNS = ("nr", "nl", "grid_points")


@dataclass
class ConvergenceReport:
    problem: str
    scheme: str
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        return [f.name for f in fields(ReportRow)]

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_cell(getattr(row, c)) for c in self.columns])
        return path

    @classmethod
    def from_csv(cls, path: str | Path, problem: str = "", scheme: str = "") -> ConvergenceReport:
        rows = []
        with Path(path).open(newline="") as fh:
            for rec in csv.DictReader(fh):
                kwargs: dict = dict(rec)
                for c in FLOAT_COLUMNS:
                    kwargs[c] = float(rec[c]) if rec[c] else None
                for c in INT_COLUMNS:
                    kwargs[c] = int(rec[c])
                rows.append(ReportRow(**kwargs))
        return cls(problem, scheme, rows)

    def format_table(self) -> str:
        head = f"{'mesh':>14} {'Linf':>12} {'order':>6} {'L2':>12} {'order':>6} {'cpu(s)':>9} {'points':>11}"
        lines = [head]
        for r in self.rows:
            lines.append(
                f"{r.mesh:>14} {_fmt(r.linf, '.3e'):>12} {_fmt(r.linf_order, '.2f'):>6} "
                f"{_fmt(r.l2, '.3e'):>12} {_fmt(r.l2_order, '.2f'):>6} "
                f"{r.seconds:9.2f} {r.grid_points:>11,d}"
                + ("" if r.status == "ok" else f"  [{r.status}]")
            )
        return "\n".join(lines)


def _fmt(v, spec):
    return "" if v is None or (isinstance(v, float) and math.isnan(v)) else format(v, spec)


def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.5e}"
    return str(v)


def run_study(
    configs: Sequence[RunConfig],
    csv_path: Optional[str | Path] = None,
    on_row: Optional[Callable[[ReportRow, RunResult], None]] = None,
) -> ConvergenceReport:
    """Execute refined runs in order and tabulate errors, orders and costs."""
    if not configs:
        raise ValueError("a study needs at least one run")
    first = configs[0]
    if any(c.problem != first.problem or c.scheme != first.scheme for c in configs):
        raise ValueError("all runs of a study must share problem and scheme")
    report = ConvergenceReport(first.problem, first.scheme)
    prev: Optional[tuple[float, float]] = None
    for cfg in configs:
        result = execute(cfg)
        linf = l2 = linf_order = l2_order = None
        status = "ok"
        if result.error is not None:
            status = result.error
            prev = None
        elif cfg.spec.exact is not None:
            try:
                linf, l2 = error_norms(result.solution, cfg.spec.exact, cfg.resolved_tfinal)
            except ValueError as exc:
                status = str(exc)
            else:
                if prev is not None:
                    linf_order = observed_order(prev[0], linf)
                    l2_order = observed_order(prev[1], l2)
                prev = (linf, l2)
        row = ReportRow(
            mesh=cfg.mesh_label(), mode=cfg.mode, nr=cfg.nr, nl=cfg.nl,
            linf=linf, linf_order=linf_order, l2=l2, l2_order=l2_order,
            seconds=result.seconds, grid_points=cfg.grid_points(), status=status,
        )
        report.rows.append(row)
        if on_row is not None:
            on_row(row, result)
    if csv_path is not None:
        report.to_csv(csv_path)
    return report


def study_configs(base: RunConfig, root_cells: Iterable[int]) -> list[RunConfig]:
    return [replace(base, nr=int(n)) for n in root_cells]


# {{{ solution dumps

DUMP_FORMATS = ("field", "cut", "slice")


def diagonal_cut(u: GridFunction, z_index: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Values along ``x = y`` (on the plane ``z = z[z_index]`` in 3D)."""
    nx, ny = u.spec.shape[:2]
    if nx != ny or u.spec.spacing[0] != u.spec.spacing[1]:
        raise ValueError("diagonal cut needs equal x and y resolution")
    i = np.arange(nx)
    values = u.values[i, i] if u.spec.dim == 2 else u.values[i, i, z_index]
    return u.spec.axis_coordinates(0), values


def total_variation(values: np.ndarray) -> float:
    return float(np.sum(np.abs(np.diff(values))))


def _write_rows(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    data = np.column_stack([np.ravel(c) for c in columns])
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.5e")
    return path


def dump_solution(
    u: GridFunction,
    formats: Iterable[str],
    out_dir: str | Path,
    prefix: str = "solution",
    z_indices: Optional[Sequence[int]] = None,
) -> list[Path]:
    """Write plot-ready CSV files for ``u``.

    ``field`` is every node with its coordinates, ``cut`` the line ``x = y``
    and ``slice`` an x-y plane (3D only). In 3D the cut and slice are taken
    at each entry of ``z_indices`` (default: the bottom and middle planes).
    """
    formats = list(formats)
    unknown = set(formats) - set(DUMP_FORMATS)
    if unknown:
        raise ValueError(f"unknown dump formats: {sorted(unknown)}")
    if not formats:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dim = u.spec.dim
    names = ("x", "y", "z")[:dim]
    if z_indices is None:
        z_indices = [0, u.spec.shape[2] // 2] if dim == 3 else [0]
    written = []
    if "field" in formats:
        grids = np.meshgrid(*(u.spec.axis_coordinates(k) for k in range(dim)), indexing="ij")
        written.append(
            _write_rows(out / f"{prefix}_field.csv", [*names, "u"], [*grids, u.values])
        )
    for k in z_indices if dim == 3 else [0]:
        tag = f"_z{k}" if dim == 3 else ""
        if "cut" in formats:
            x, v = diagonal_cut(u, k)
            written.append(_write_rows(out / f"{prefix}_cut{tag}.csv", ["x", "u"], [x, v]))
        if "slice" in formats and dim == 3:
            gx, gy = np.meshgrid(u.spec.axis_coordinates(0), u.spec.axis_coordinates(1), indexing="ij")
            written.append(
                _write_rows(out / f"{prefix}_slice{tag}.csv", ["x", "y", "u"], [gx, gy, u.values[:, :, k]])
            )
    return written

# }}}
