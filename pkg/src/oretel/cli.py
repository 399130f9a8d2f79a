"""Command line front end: ``oretel <subcommand> ...``.

Exit status 0 on success, 1 when the mathematics says no (not proper, no
telescoper up to r_max, a pair that does not verify) and 2 on bad input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass

from .arith import FieldSpec, InexactDivision, to_expr
from .fileformat import FileFormatError, format_report, parse_pair_file, parse_system_file
from .gff import gff
from .ore import OreSpec
from .parsing import ExpressionError, parse_operator, parse_rational
from .properness import NotProper, properness_report
from .system import InvalidSystem
from .telescoper import TelescopeFailure, order_bound, telescope, verify_pair

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2
SUBCOMMANDS = ("telescope", "bound", "properness", "verify", "gff", "apply")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    path: str | None = None
    pair_path: str | None = None
    phi: int | None = None
    r_start: int = 1
    r_max: int | None = None
    structured: bool = False
    out: str | None = None
    threads: int = 0
    expression: str | None = None
    operand: str | None = None
    var: str = "y"
    algebra: str = "x: shift, y: shift"
    field: str = ""

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        if self.r_start < 1:
            raise InputError("--r-start must be at least 1")
        if self.r_max is not None and self.r_max < self.r_start:
            raise InputError("--r-max must not be smaller than --r-start")
        if self.phi is not None and self.phi < 0:
            raise InputError("--phi must be nonnegative")


def _threads_from_env() -> int:
    raw = os.environ.get("ORETEL_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"ORETEL_THREADS must be a nonnegative integer, got {raw!r}") from None
    if value < 0:
        raise InputError("ORETEL_THREADS must be a nonnegative integer")
    return value


def _algebra(config: RunConfig) -> OreSpec:
    params = tuple(p.strip() for p in config.field.split(",") if p.strip())
    kinds = {}
    for part in config.algebra.split(","):
        name, _, kind = part.partition(":")
        kinds[name.strip()] = kind.strip()
    if set(kinds) != {"x", "y"}:
        raise InputError("--algebra must look like 'x: kind, y: kind'")
    return OreSpec(FieldSpec(params), kinds["x"], kinds["y"])


def _check_phi(config: RunConfig, system) -> None:
    if config.phi is not None and config.phi > system.n:
        raise InputError(f"--phi must not exceed n = {system.n}")


# -- subcommands -------------------------------------------------------------

def cmd_telescope(config: RunConfig):
    system = parse_system_file(config.path)
    _check_phi(config, system)
    t0 = time.perf_counter()
    try:
        pair = telescope(system, phi=config.phi, r_start=config.r_start, r_max=config.r_max)
    except TelescopeFailure as exc:
        items = [("status", "failure"), ("reason", str(exc))]
        items += [(k, v) for k, v in sorted(exc.diagnostics.items())]
        return EXIT_MATH, items
    elapsed = time.perf_counter() - t0
    ok = verify_pair(system, pair)
    d = pair.diagnostics
    items = [
        ("status", "ok" if ok else "failure"),
        ("telescoper", pair.T.to_expr()),
        ("order", pair.order),
        ("certificate", ", ".join(to_expr(c) for c in pair.c)),
    ]
    if pair.C_operator is not None:
        items.append(("certificate_operator", pair.C_operator.to_expr()))
    items += [
        ("verified", "true" if ok else "false"),
        ("r", d["r"]),
        ("s", d["s"]),
        ("s_clamped", "true" if d["s_clamped"] else "false"),
        ("gamma", d["gamma"]),
        ("height", d["height"]),
        ("eta", d["eta"]),
        ("phi", d["phi"]),
        ("bound", d["bound"]),
        ("equations", d["equations"]),
        ("unknowns", d["unknowns"]),
    ]
    if not config.structured:
        items.append(("elapsed", f"{elapsed:.3f}s"))
    return (EXIT_OK if ok else EXIT_MATH), items


def cmd_bound(config: RunConfig):
    system = parse_system_file(config.path)
    _check_phi(config, system)
    report = properness_report(system, config.phi)
    if not report.proper:
        return EXIT_MATH, [("proper", "false"), ("reason", report.reason)]
    items = [
        ("eta", report.eta),
        ("gamma", report.gamma),
        ("height", report.height),
        ("phi", report.phi_bound),
        ("n", system.n),
        ("bound", order_bound(system, config.phi)),
    ]
    return EXIT_OK, items


def cmd_properness(config: RunConfig):
    system = parse_system_file(config.path)
    _check_phi(config, system)
    report = properness_report(system, config.phi)
    items = [("proper", "true" if report.proper else "false")]
    for factor, kind in report.factor_classification:
        items.append(("factor", f"{to_expr(factor)} [{kind}]"))
    if not report.proper:
        items.append(("reason", report.reason))
        return EXIT_MATH, items
    items += [
        ("eta", report.eta),
        ("gamma", report.gamma),
        ("height", report.height),
        ("phi", report.phi_bound),
        ("upper_bound_only", "true" if report.upper_bound_only else "false"),
    ]
    w = report.witness
    items.append(("witness_r", w.r))
    for f, p, q in zip(w.f, w.p, w.q):
        items.append(("witness_factor", f"{to_expr(f)} p={p} q={q}"))
    items += [("witness_g", to_expr(w.g)), ("witness_h", to_expr(w.h))]
    return EXIT_OK, items


def cmd_verify(config: RunConfig):
    system = parse_system_file(config.path)
    pair = parse_pair_file(config.pair_path, system)
    ok = verify_pair(system, pair)
    return (EXIT_OK if ok else EXIT_MATH), [("verified", "true" if ok else "false")]


def cmd_gff(config: RunConfig):
    spec = _algebra(config)
    f = parse_rational(config.expression, spec.fieldspec)
    if not f.denom.is_ground:
        raise InputError("gff needs a polynomial")
    if not f:
        raise InputError("gff of the zero polynomial")
    p = f.numer * (1 / f.denom.LC)
    if p.degree(1 if config.var == "y" else 0) <= 0:
        dec_items = [("content", to_expr(f))]
        return EXIT_OK, dec_items + [("left_border", "1"), ("right_border", "1")]
    dec = gff(p, config.var, spec)
    items = [("content", to_expr(dec.content))]
    for q, i in dec.factors:
        items.append(("factor", f"[{i}] {to_expr(q)}"))
    items += [("left_border", to_expr(dec.left_border)), ("right_border", to_expr(dec.right_border))]
    return EXIT_OK, items


def cmd_apply(config: RunConfig):
    spec = _algebra(config)
    op = parse_operator(config.expression, spec)
    f = parse_rational(config.operand, spec.fieldspec)
    return EXIT_OK, [("result", to_expr(op.apply(f)))]


_DISPATCH = {
    "telescope": cmd_telescope,
    "bound": cmd_bound,
    "properness": cmd_properness,
    "verify": cmd_verify,
    "gff": cmd_gff,
    "apply": cmd_apply,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns (exit status, report text)."""
    try:
        status, items = _DISPATCH[config.subcommand](config)
    except (FileFormatError, ExpressionError, InvalidSystem, InputError, OSError) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except NotProper as exc:
        return EXIT_MATH, format_report([("proper", "false"), ("reason", str(exc))], config.structured)
    except (ValueError, InexactDivision) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    return status, format_report(items, config.structured)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oretel", description="Creative telescoping for D-finite systems.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, phi=True):
        if phi:
            p.add_argument("--phi", type=int, default=None, help="override for phi (default n)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--out", default=None, help="write the report to this file")

    p = sub.add_parser("telescope", help="compute a telescoper and certificate")
    p.add_argument("system")
    p.add_argument("--r-start", type=int, default=1)
    p.add_argument("--r-max", type=int, default=None)
    common(p)
    p = sub.add_parser("bound", help="print eta, gamma, height, phi and the order bound")
    p.add_argument("system")
    common(p)
    p = sub.add_parser("properness", help="decide y-properness and report the witness")
    p.add_argument("system")
    common(p)
    p = sub.add_parser("verify", help="check a telescoper/certificate pair")
    p.add_argument("system")
    p.add_argument("pair")
    common(p, phi=False)
    for name, helptext in (("gff", "greatest factorial factorisation"), ("apply", "apply an operator")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("expression")
        if name == "apply":
            p.add_argument("operand")
        else:
            p.add_argument("--var", choices=("x", "y"), default="y")
        p.add_argument("--algebra", default="x: shift, y: shift")
        p.add_argument("--field", default="", help="comma separated parameters")
        common(p, phi=False)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        path=getattr(args, "system", None),
        pair_path=getattr(args, "pair", None),
        phi=getattr(args, "phi", None),
        r_start=getattr(args, "r_start", 1),
        r_max=getattr(args, "r_max", None),
        structured=args.format == "structured",
        out=args.out,
        threads=_threads_from_env(),
        expression=getattr(args, "expression", None),
        operand=getattr(args, "operand", None),
        var=getattr(args, "var", "y"),
        algebra=getattr(args, "algebra", "x: shift, y: shift"),
        field=getattr(args, "field", ""),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = config_from_args(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, text = run(config)
    if config.out:
        try:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        stream = sys.stderr if text.startswith("error:") else sys.stdout
        stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
