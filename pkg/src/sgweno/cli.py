"""Command-line front end.

Examples::

    sgweno --problem burgers_source_2d --mode single --scheme linear --nr 10 --nl 3
    sgweno --problem burgers_source_2d --mode sparse --study 10,20,40 --out results/
    sgweno --problem burgers2d --tfinal 0.5066 --prolongation weno --dump cut,field

A ``--config`` file holds ``key = value`` lines using the long flag names;
explicit flags take precedence over it.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from sgweno.harness import (
    DUMP_FORMATS,
    ConfigError,
    RunConfig,
    dump_solution,
    run_study,
    study_configs,
)
from sgweno.problems import problem_names

logger = logging.getLogger("sgweno")

EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sgweno",
        description="Third-order WENO on single grids or sparse grids (combination technique).",
    )
    p.add_argument("--config", type=Path, help="key=value file with defaults for the flags below")
    p.add_argument("--problem", choices=problem_names())
    p.add_argument("--mode", choices=("single", "sparse"), default="sparse")
    p.add_argument("--scheme", choices=("linear", "weno"), default="weno")
    p.add_argument("--prolongation", choices=("lagrange", "weno"), default="lagrange")
    p.add_argument("--nr", type=int, default=10, help="root-grid cells per axis")
    p.add_argument("--nl", type=int, default=3, help="finest refinement level")
    p.add_argument("--cfl", type=float, help="CFL number (default: per problem)")
    p.add_argument("--eps", type=float, help="WENO epsilon (default: per problem)")
    p.add_argument("--tfinal", type=float, help="final time (default: per problem)")
    p.add_argument("--out", type=Path, help="output directory for CSV files")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--study", type=_int_list, help="comma-separated root-cell counts")
    p.add_argument(
        "--dump", type=_str_list, default=[],
        help=f"solution files to write, any of {','.join(DUMP_FORMATS)}",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def read_config_file(path: Path) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        known = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, raw in read_config_file(args.config).items():
            if key not in known or key in ("config", "help"):
                raise ConfigError(f"unknown config key {key!r}")
            action = known[key]
            defaults[key] = action.type(raw) if action.type else raw
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if args.problem is None:
        raise ConfigError("--problem is required (flag or config file)")
    return args


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        problem=args.problem,
        mode=args.mode,
        scheme=args.scheme,
        prolongation=args.prolongation,
        nr=args.nr,
        nl=args.nl,
        cfl=args.cfl,
        eps=args.eps,
        tfinal=args.tfinal,
        out=str(args.out) if args.out else None,
        threads=args.threads,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )
        base = config_from_args(args)
        configs = study_configs(base, args.study) if args.study else [base]
        unknown = set(args.dump) - set(DUMP_FORMATS)
        if unknown:
            raise ConfigError(f"unknown dump formats: {sorted(unknown)}")
    except (ConfigError, OSError) as exc:
        print(f"sgweno: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out) if args.out else None
    tag = f"{base.problem}_{base.mode}_{base.scheme}"
    csv_path = out / f"{tag}_report.csv" if out else None

    last: list = []

    def show(row, result):
        last[:] = [result]
        logger.info(
            "%s  Linf=%s  L2=%s  %.2fs  %s",
            row.mesh, row.linf, row.l2, row.seconds, row.status,
        )

    report = run_study(configs, csv_path=csv_path, on_row=show)
    print(report.format_table())
    if csv_path is not None:
        print(f"report written to {csv_path}")

    if args.dump:
        if out is None:
            print("sgweno: error: --dump needs --out", file=sys.stderr)
            return EXIT_CONFIG
        result = last[0]
        if result.solution is not None:
            for path in dump_solution(
                result.solution, args.dump, out, prefix=f"{tag}_nr{configs[-1].nr}"
            ):
                print(f"wrote {path}")

    if any(r.status != "ok" for r in report.rows):
        for r in report.rows:
            if r.status != "ok":
                print(f"sgweno: {r.mesh}: {r.status}", file=sys.stderr)
        return EXIT_BLOWUP
    return 0


if __name__ == "__main__":
    sys.exit(main())
