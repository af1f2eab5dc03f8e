"""Command-line entry point.

    hilbchow ranks     --surface P2 --n 4
    hilbchow universal --surface P2 --partition 2,1 --gamma h,pt [--format structured] [--trace]
    hilbchow eval1     --surface P2 --input expr.json
    hilbchow verify    --surface P1xP1
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import fock
from .oracle import OracleError, evaluate_n1
from .rewrite_engine import codimension, describe, nakajima_to_universal
from .surface_algebra import SurfaceClass, SurfaceData, SurfaceError, load_surface
from .universal_expr import dumps, loads, render_lines
from .verification import run_suites

TEXT, STRUCTURED = "text", "structured"


@dataclass
class JobConfig:
    surface: str
    command: str
    n: int | None = None
    partition: tuple[int, ...] = ()
    gamma: tuple[str, ...] = ()
    truncation: int | None = None
    output: str = TEXT
    verbose: bool = False

    def validate(self) -> None:
        if any(k < 1 for k in self.partition):
            raise ValueError("partition parts must be positive")
        if self.n is not None and self.partition and sum(self.partition) != self.n:
            raise ValueError(f"partition {self.partition} does not sum to n = {self.n}")
        if len(self.gamma) != len(self.partition):
            raise ValueError(
                f"gamma has {len(self.gamma)} factors but the partition has {len(self.partition)} parts"
            )


def parse_partition(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(p) for p in text.split(","))


def parse_gamma(text: str) -> tuple[str, ...]:
    text = text.strip()
    return tuple(p.strip() for p in text.split(",")) if text else ()


def cmd_ranks(surface: SurfaceData, n_max: int) -> list[str]:
    if n_max < 0:
        raise ValueError("n must be nonnegative")
    lines = []
    for n in range(n_max + 1):
        poly = fock.poincare(n, surface)
        lines.append(f"n={n}\trank={fock.rank(n, surface)}\tpoincare={poly}")
    return lines


def cmd_universal(surface: SurfaceData, cfg: JobConfig) -> list[str]:
    gamma = [surface.cls(g) for g in cfg.gamma]
    st = nakajima_to_universal(cfg.partition, gamma, surface, cfg.truncation, return_state=True)
    out = []
    if cfg.verbose:
        out.extend(f"# {entry}" for entry in st.log)
    if cfg.output == STRUCTURED:
        out.append(dumps(st.expr))
    else:
        out.append(f"# {describe(cfg.partition, gamma)}  codim {codimension(cfg.partition, gamma)}")
        out.extend(render_lines(st.expr))
    return out


def cmd_eval1(surface: SurfaceData, cfg: JobConfig, source: str | None) -> list[str]:
    if source:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        expr = loads(surface, text)
    else:
        gamma = [surface.cls(g) for g in cfg.gamma]
        expr = nakajima_to_universal(cfg.partition, gamma, surface, cfg.truncation)
    value: SurfaceClass = evaluate_n1(expr)
    if cfg.output == STRUCTURED:
        coeffs = {surface.symbols[i]: str(c) for i, c in sorted(value.coeffs.items())}
        return [json.dumps({"surface": surface.name, "class": coeffs})]
    return [repr(value)]


def cmd_verify(source: str) -> tuple[int, list[str]]:
    results = run_suites(source)
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.ok]
    if failed:
        lines.append("FAILED: " + ", ".join(failed))
        return 1, lines
    lines.append("all suites passed")
    return 0, lines


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", default="P2", help="surface file, or a bundled name (P2, P1xP1)")
    common.add_argument("--format", dest="output", choices=(TEXT, STRUCTURED), default=TEXT)
    common.add_argument("--trace", action="store_true", help="print the rule log")

    job = argparse.ArgumentParser(add_help=False)
    job.add_argument("--n", type=int)
    job.add_argument("--partition", type=parse_partition, default=())
    job.add_argument("--gamma", type=parse_gamma, default=(),
                     help="comma separated classes, one per part, e.g. 'h,2*pt'")
    job.add_argument("--truncation", type=int)

    parser = argparse.ArgumentParser(prog="hilbchow", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ranks = sub.add_parser("ranks", parents=[common], help="basis ranks and Poincare polynomials")
    ranks.add_argument("--n", type=int, default=4, help="largest n")
    sub.add_parser("universal", parents=[common, job], help="rewrite a basis element as a universal class")
    ev = sub.add_parser("eval1", parents=[common, job], help="evaluate a Hilb(1) class on S")
    ev.add_argument("--input", help="structured expression file, '-' for stdin")
    sub.add_parser("verify", parents=[common], help="run the verification suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        code, lines = cmd_verify(args.surface)
        print("\n".join(lines))
        return code
    try:
        surface = load_surface(args.surface)
        if args.command == "ranks":
            lines = cmd_ranks(surface, args.n)
        else:
            cfg = JobConfig(
                args.surface, args.command, args.n, args.partition, args.gamma,
                args.truncation, args.output, args.trace,
            )
            if args.command == "universal":
                cfg.validate()
                lines = cmd_universal(surface, cfg)
            else:
                if not args.input:
                    cfg.validate()
                lines = cmd_eval1(surface, cfg, args.input)
    except (SurfaceError, OracleError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
