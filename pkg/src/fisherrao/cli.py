"""Command-line interface over matrix text files.

Exit codes: 0 success, 1 verification failure, 2 parse/usage error (message
names the file and line), 3 input not positive definite (message reports the
minimum eigenvalue), 4 dimension mismatch.

Structured output is JSON Lines: one JSON object per line with explicit
keys.  `iter_records` is the matching reader.  Human output is plain text
(scalars, matrix text blocks, or an aligned table for verify).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MatrixFormatError, NotPositiveDefinite
from .geometry import DistanceConvention, Geodesic, distance, log_map, metric, pencil_eigenvalues
from .matrixio import fmt_float, format_matrix, read_spd_matrix, read_symmetric_matrix
from .suite import SUITE_NAMES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_NOT_SPD = 3
EXIT_DIMENSION = 4

_DEFAULT_DIMS = (1, 2, 3, 5, 10)


@dataclass(frozen=True)
class CliConfig:
    """Parsed command line; `to_argv` reproduces an equivalent argument list."""

    command: str
    paths: tuple[str, ...] = ()
    convention: str = "paper"
    method: str = "trace"
    samples: int | None = None
    t0: float = 0.0
    t1: float = 1.0
    seed: int = 42
    suite: str = "full"
    dims: tuple[int, ...] = field(default=_DEFAULT_DIMS)
    fmt: str = "human"

    def to_argv(self) -> list[str]:
        argv = [self.command, *self.paths]
        if self.command == "distance":
            argv += ["--convention", self.convention, "--method", self.method]
        if self.command == "geodesic":
            argv += ["--t0", fmt_float(self.t0), "--t1", fmt_float(self.t1)]
            if self.samples is not None:
                argv += ["--samples", str(self.samples)]
        if self.command == "verify":
            argv += [
                "--suite", self.suite,
                "--seed", str(self.seed),
                "--dims", ",".join(str(d) for d in self.dims),
            ]
            if self.samples is not None:
                argv += ["--samples", str(self.samples)]
        argv += ["--format", self.fmt]
        return argv


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be positive integers, got {text!r}")
    return dims


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text!r}")
    return value


def _draw_count(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 draws, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fisherrao",
        description="Geodesic distance and Fisher geometry of SPD matrices over matrix text files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", dest="fmt", choices=("human", "structured"),
                       default="human", help="output format (default: human)")

    p = sub.add_parser("distance", help="geodesic distance between two SPD matrix files")
    p.add_argument("paths", nargs=2, metavar=("A", "B"))
    p.add_argument("--convention", choices=("paper", "smith"), default="paper",
                   help="overall scaling (smith = paper * sqrt(2))")
    p.add_argument("--method", choices=("trace", "pencil"), default="trace",
                   help="computation route (default: trace)")
    add_format(p)

    p = sub.add_parser("geodesic", help="sample the geodesic between two SPD matrix files")
    p.add_argument("paths", nargs=2, metavar=("A", "B"))
    p.add_argument("--samples", type=int, default=11, help="number of samples (>= 2)")
    p.add_argument("--t0", type=float, default=0.0, help="first parameter value")
    p.add_argument("--t1", type=float, default=1.0, help="last parameter value")
    add_format(p)

    p = sub.add_parser("logmap", help="tangent direction from A to B (a matrix text block)")
    p.add_argument("paths", nargs=2, metavar=("A", "B"))
    add_format(p)

    p = sub.add_parser("expmap", help="geodesic endpoint from base A along tangent V")
    p.add_argument("paths", nargs=2, metavar=("A", "V"))
    add_format(p)

    p = sub.add_parser("metric", help="metric value g_R(A, B) for base R and tangents A, B")
    p.add_argument("paths", nargs=3, metavar=("R", "A", "B"))
    add_format(p)

    p = sub.add_parser("pencil", help="generalized eigenvalues of the pencil B - lambda*A")
    p.add_argument("paths", nargs=2, metavar=("A", "B"))
    add_format(p)

    p = sub.add_parser("verify", help="run the numerical verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="full",
                   help="which checks to run (default: full)")
    p.add_argument("--seed", type=_nonneg_int, default=42, help="master seed (default: 42)")
    p.add_argument("--dims", type=_parse_dims, default=_DEFAULT_DIMS,
                   help="comma-separated matrix dimensions (default: 1,2,3,5,10)")
    p.add_argument("--samples", type=_draw_count, default=None,
                   help="Monte Carlo draws per estimate (default: 1000000)")
    add_format(p)

    return parser


def parse_cli(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    fields = {"command": ns.command, "fmt": ns.fmt}
    if hasattr(ns, "paths"):
        fields["paths"] = tuple(ns.paths)
    for name in ("convention", "method", "samples", "t0", "t1", "seed", "suite", "dims"):
        if hasattr(ns, name):
            fields[name] = getattr(ns, name)
    return CliConfig(**fields)


def iter_records(text: str) -> list[dict]:
    """Reader for the structured (JSON Lines) output format."""
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _emit(record: dict, human: str, cfg: CliConfig) -> None:
    if cfg.fmt == "structured":
        print(json.dumps(record, sort_keys=True))
    else:
        print(human)


def _read_spd(path: str):
    try:
        return read_spd_matrix(path)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(exc.min_eigenvalue, exc.max_eigenvalue, context=str(path)) from exc


def _canonical_pair(a_path: str, b_path: str):
    """Load two SPD files in a canonical order so symmetric commands print
    byte-identical output regardless of argument order."""
    a = _read_spd(a_path)
    b = _read_spd(b_path)
    key_a = (a.dim, tuple(a.entries.ravel()))
    key_b = (b.dim, tuple(b.entries.ravel()))
    return (a, b) if key_a <= key_b else (b, a)


def _cmd_distance(cfg: CliConfig) -> int:
    a, b = _canonical_pair(*cfg.paths)
    value = distance(a, b, convention=DistanceConvention(cfg.convention), method=cfg.method)
    _emit(
        {"command": "distance", "value": value,
         "convention": cfg.convention, "method": cfg.method},
        fmt_float(value),
        cfg,
    )
    return EXIT_OK


def _cmd_geodesic(cfg: CliConfig) -> int:
    if cfg.samples is None or cfg.samples < 2:
        raise _CliUsageError(f"--samples must be at least 2, got {cfg.samples}")
    a = _read_spd(cfg.paths[0])
    b = _read_spd(cfg.paths[1])
    geo = Geodesic(a, log_map(a, b))
    for t in np.linspace(cfg.t0, cfg.t1, cfg.samples):
        point = geo.point(float(t))
        if cfg.fmt == "structured":
            print(json.dumps(
                {"command": "geodesic", "t": float(t), "matrix": point.entries.tolist()},
                sort_keys=True,
            ))
        else:
            sys.stdout.write(format_matrix(point.entries, comment=f"t = {fmt_float(float(t))}"))
    return EXIT_OK


def _cmd_logmap(cfg: CliConfig) -> int:
    a = _read_spd(cfg.paths[0])
    b = _read_spd(cfg.paths[1])
    d = log_map(a, b)
    _emit(
        {"command": "logmap", "matrix": d.entries.tolist()},
        format_matrix(d.entries).rstrip("\n"),
        cfg,
    )
    return EXIT_OK


def _cmd_expmap(cfg: CliConfig) -> int:
    a = _read_spd(cfg.paths[0])
    v = read_symmetric_matrix(cfg.paths[1])
    end = Geodesic(a, v).point(1.0)
    _emit(
        {"command": "expmap", "matrix": end.entries.tolist()},
        format_matrix(end.entries).rstrip("\n"),
        cfg,
    )
    return EXIT_OK


def _cmd_metric(cfg: CliConfig) -> int:
    base = _read_spd(cfg.paths[0])
    a = read_symmetric_matrix(cfg.paths[1])
    b = read_symmetric_matrix(cfg.paths[2])
    value = metric(base, a, b)
    _emit({"command": "metric", "value": value}, fmt_float(value), cfg)
    return EXIT_OK


def _cmd_pencil(cfg: CliConfig) -> int:
    a, b = _read_spd(cfg.paths[0]), _read_spd(cfg.paths[1])
    values = pencil_eigenvalues(a, b)
    _emit(
        {"command": "pencil", "eigenvalues": values.tolist()},
        " ".join(fmt_float(v) for v in values),
        cfg,
    )
    return EXIT_OK


def _cmd_verify(cfg: CliConfig) -> int:
    suite_cfg = SuiteConfig(
        suite=cfg.suite,
        seed=cfg.seed,
        dims=cfg.dims,
        **({"mc_samples": cfg.samples} if cfg.samples is not None else {}),
    )
    reports = run_suite(suite_cfg)
    if cfg.fmt == "structured":
        for report in reports:
            print(json.dumps(report.as_dict(), sort_keys=True))
    elif reports:
        width = max(len(r.check_name) for r in reports)
        for r in reports:
            status = "ok  " if r.passed else "FAIL"
            print(f"{status} {r.check_name:<{width}}  residual={fmt_float(r.residual)}"
                  f"  tolerance={fmt_float(r.tolerance)}  seed={r.seed}")
        failed = sum(not r.passed for r in reports)
        print(f"{len(reports)} checks: {len(reports) - failed} passed, {failed} failed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


class _CliUsageError(Exception):
    pass


_COMMANDS = {
    "distance": _cmd_distance,
    "geodesic": _cmd_geodesic,
    "logmap": _cmd_logmap,
    "expmap": _cmd_expmap,
    "metric": _cmd_metric,
    "pencil": _cmd_pencil,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    cfg = parse_cli(argv if argv is not None else sys.argv[1:])
    try:
        return _COMMANDS[cfg.command](cfg)
    except MatrixFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotPositiveDefinite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SPD
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION


if __name__ == "__main__":
    sys.exit(main())
