"""Command-line entry point.

Exit codes: 0 success, 1 verify failure, 2 configuration error, 3 numeric
nonconvergence.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import report
from .config import FORMATS, RunConfig, build_config, load_file, parse_assignment
from .core import ConfigError, HoloFun, Point, Strip, gallery_symbol, parse_complex
from .criteria import (
    boundary_vanishing_check,
    boundedness_certificate,
    compactness_probe,
    criterion_m1,
    criterion_m2,
    growth_constant_estimate,
    strip_decay_check,
)
from .exprlang import ParseError, expr_function
from .ops import DEFAULT_Z0, OperatorKind, apply, extremal_fw, two_leg_path
from .quad import DEFAULT_HEIGHTS, NonConvergenceError, hardy_norm

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message, "arguments")


# ---------------------------------------------------------------- inputs


def resolve_function(text: str) -> HoloFun:
    """``fw:<u>,<v>`` (extremal function at u + iv) or a gallery id."""
    if text.startswith("fw:"):
        w = parse_complex(text[3:], "function")
        try:
            return extremal_fw(w)
        except ValueError as exc:
            raise ConfigError(str(exc), "function") from None
    return gallery_symbol(text)


def _expr(text, field):
    try:
        return expr_function(text)
    except ParseError as exc:
        raise ConfigError(str(exc), field) from None


def _symbol(args) -> tuple[HoloFun, dict]:
    if args.symbol is not None and args.symbol_expr is not None:
        raise ConfigError("give --symbol or --symbol-expr, not both", "symbol")
    if args.symbol is not None:
        return gallery_symbol(args.symbol), {"symbol": args.symbol}
    if args.symbol_expr is not None:
        return _expr(args.symbol_expr, "symbol_expr"), {"symbol_expr": args.symbol_expr}
    raise ConfigError("a symbol is required (--symbol or --symbol-expr)", "symbol")


def _function(args) -> tuple[HoloFun, dict]:
    if args.function is not None and args.function_expr is not None:
        raise ConfigError("give --function or --function-expr, not both", "function")
    if args.function is not None:
        return resolve_function(args.function), {"function": args.function}
    if args.function_expr is not None:
        return _expr(args.function_expr, "function_expr"), {"function_expr": args.function_expr}
    raise ConfigError("a function is required (--function or --function-expr)", "function")


def _point(text, field) -> Point:
    z = parse_complex(text, field)
    try:
        return Point.of(z)
    except ValueError as exc:
        raise ConfigError(str(exc), field) from None


def _fw_center(f: HoloFun, args) -> tuple[float, float]:
    """(center, height scale) adapted to an extremal function, else (0, 1)."""
    if args.function is not None and args.function.startswith("fw:"):
        w = parse_complex(args.function[3:])
        return w.real, w.imag
    return 0.0, 1.0


# ---------------------------------------------------------------- commands


def cmd_hardy_norm(args, cfg: RunConfig):
    f, inputs = _function(args)
    center, scale = _fw_center(f, args)
    est = hardy_norm(f, scale * DEFAULT_HEIGHTS, cfg.quad, center=center)
    rows = [{"height": l.scale, "norm": l.value} for l in est.levels]
    return inputs, {"estimate": est}, rows, list(est.warnings) + (["sup approached at the smallest height"] if est.boundary else [])


def cmd_criteria(args, cfg: RunConfig):
    g, inputs = _symbol(args)
    inputs["which"] = args.which
    forms = ("m1", "m2") if args.which == "both" else (args.which,)
    results, rows, warnings = {}, [], []
    for form in forms:
        est = (criterion_m1 if form == "m1" else criterion_m2)(g, cfg.region, cfg.quad)
        results[form] = est
        rows += [{"statistic": form, "kind": "level", "scale": l.scale, "value": l.value} for l in est.levels]
        warnings += [f"{form}: {w}" for w in est.warnings]
        if est.divergent:
            warnings.append(f"{form}: supremum grows without bound under region doubling")
        if args.vanishing:
            rep = boundary_vanishing_check(g, form, cfg.region, cfg.quad, cfg.radii)
            results[f"{form}_vanishing"] = rep
            rows += [{"statistic": form, "kind": "radius", "scale": r, "value": s} for r, s in zip(rep.radii, rep.sups)]
    return inputs, results, rows, warnings


def cmd_apply(args, cfg: RunConfig):
    g, inputs = _symbol(args)
    f, fin = _function(args)
    inputs.update(fin)
    kind = OperatorKind.parse(args.op)
    z0, z = _point(args.z0, "z0"), _point(args.z, "z")
    via = two_leg_path(z0, z) if args.path == "two-leg" else ()
    inputs.update({"op": kind.value, "z0": z0, "z": z, "path": args.path})
    res = apply(kind, g, f, z0, z, cfg.quad, via=via)
    row = {"op": kind.value, "re": res.value.real, "im": res.value.imag, "quad_error": res.quad_error}
    return inputs, {"result": res}, [row], []


def cmd_certify(args, cfg: RunConfig):
    g, inputs = _symbol(args)
    kind = OperatorKind.parse(args.op)
    inputs["op"] = kind.value
    cert = boundedness_certificate(kind, g, cfg.region, cfg.quad, cfg.jobs)
    rows = [{"w": r.w, "bloch": r.bloch, "hardy": r.hardy, "ratio": r.ratio} for r in cert.witnesses]
    warnings = ["Hardy norm of f_w is 1/sqrt(2), not 1; ratios use the measured norm"]
    return inputs, {"certificate": cert}, rows, warnings


def cmd_probe(args, cfg: RunConfig):
    g, inputs = _symbol(args)
    kind = OperatorKind.parse(args.op)
    levels = args.levels if args.levels is not None else cfg.probe_levels
    inputs.update({"op": kind.value, "x_anchor": args.x_anchor, "levels": levels, "z0": DEFAULT_Z0})
    p = compactness_probe(kind, g, args.x_anchor, levels, cfg.region, cfg.quad, cfg.jobs)
    rows = [
        {"n": l.n, "w": l.w, "lower": l.lower, "lower_eval": l.lower_eval, "full_norm": l.full_norm,
         "divergent": l.divergent, "error": l.error}
        for l in p.levels
    ]
    warnings = [f"level {l.n}: {l.error}" for l in p.levels if l.error]
    return inputs, {"probe": p}, rows, warnings


def cmd_strip_decay(args, cfg: RunConfig):
    f, inputs = _function(args)
    strip = Strip(args.a, args.b)
    inputs["strip"] = {"a": strip.a, "b": strip.b}
    rep = strip_decay_check(f, strip, cfg.quad)
    rows = [{"R": t, "sup": s} for t, s in zip(rep.thresholds, rep.sups)]
    return inputs, {"strip_decay": rep}, rows, []


def cmd_growth(args, cfg: RunConfig):
    f, inputs = _function(args)
    orders = (0, 1, 2) if args.order == "all" else (int(args.order),)
    inputs["order"] = args.order
    center, _ = _fw_center(f, args)
    reps = [growth_constant_estimate(f, n, cfg.region, cfg.quad, center=center) for n in orders]
    rows = [{"n": r.n, "hardy_norm": r.hardy_norm, "constant": r.constant, "refined_constant": r.refined_constant,
             "stability": r.stability, "argmax": r.argmax} for r in reps]
    return inputs, {"growth": reps}, rows, []


def cmd_verify(args, cfg: RunConfig):
    from .verify import run_checks

    modules = [m.strip() for item in (args.filter or []) for m in item.split(",") if m.strip()]
    checks = run_checks(cfg, modules or None, acceptance=args.acceptance)
    if not checks:
        raise ConfigError(f"no checks match filter {modules}", "filter")
    rows = [
        {"module": c.module, "name": c.name, "passed": c.passed, "measured": c.measured, "bound": c.bound, "detail": c.detail}
        for c in checks
    ]
    width = max(len(f"{c.module}: {c.name}") for c in checks)
    for c in checks:
        num = "" if c.measured is None else f"{c.measured:.3e}" + ("" if c.bound is None else f" vs {c.bound:.3e}")
        line = f"{'PASS' if c.passed else 'FAIL'}  {(c.module + ': ' + c.name).ljust(width)}  {num:<22}  {c.detail}"
        print(line.rstrip(), file=sys.stderr)
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    inputs = {"filter": modules, "acceptance": args.acceptance}
    results = {"passed": not failed, "checks": rows}
    warnings = [f"failed: {c.module}: {c.name}" for c in failed]
    return inputs, results, rows, warnings


COMMANDS = {
    "hardy-norm": cmd_hardy_norm,
    "criteria": cmd_criteria,
    "apply": cmd_apply,
    "certify": cmd_certify,
    "probe": cmd_probe,
    "strip-decay": cmd_strip_decay,
    "growth": cmd_growth,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of dotted keys (quad.rel_tol, region.y_min, ...)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
    common.add_argument("--format", choices=FORMATS, help="report format (default json)")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for sampled check points")
    common.add_argument("--jobs", type=int, help="worker threads for independent levels")

    sym = _Parser(add_help=False)
    sym.add_argument("--symbol", help="gallery id: zero, const:<c>, cayley, inv, exp_iz, exp_isqrtz")
    sym.add_argument("--symbol-expr", help="symbol as an expression in z")

    fun = _Parser(add_help=False)
    fun.add_argument("--function", help="fw:<u>,<v> or a gallery id")
    fun.add_argument("--function-expr", help="function as an expression in z")

    op = _Parser(add_help=False)
    op.add_argument("--op", required=True, help="jg, ig or mg")

    p = _Parser(prog="hardybloch", description="Hardy/Bloch norms and Volterra-type operators on the upper half-plane.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("hardy-norm", parents=[common, fun], help="H2 norm of a function")
    c = sub.add_parser("criteria", parents=[common, sym], help="boundedness statistics M1 and M2")
    c.add_argument("--which", choices=("m1", "m2", "both"), default="both")
    c.add_argument("--vanishing", action="store_true", help="also run the boundary-vanishing check")

    a = sub.add_parser("apply", parents=[common, sym, fun, op], help="evaluate J_g f, I_g f or M_g f at a point")
    a.add_argument("--z0", default="0,1", help="base point <re>,<im> (default 0,1)")
    a.add_argument("--z", required=True, help="evaluation point <re>,<im>")
    a.add_argument("--path", choices=("straight", "two-leg"), default="straight")

    sub.add_parser("certify", parents=[common, sym, op], help="boundedness certificate")
    pr = sub.add_parser("probe", parents=[common, sym, op], help="compactness probe along w_n = x + i 2^-n")
    pr.add_argument("--levels", type=int)
    pr.add_argument("--x-anchor", type=float, default=0.0)

    s = sub.add_parser("strip-decay", parents=[common, fun], help="decay of |f| along a horizontal strip")
    s.add_argument("--a", type=float, default=0.5)
    s.add_argument("--b", type=float, default=2.0)

    g = sub.add_parser("growth", parents=[common, fun], help="normalized derivative growth constants")
    g.add_argument("--order", choices=("0", "1", "2", "all"), default="all")

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--filter", action="append", help="only these modules (comma separated)")
    v.add_argument("--acceptance", action="store_true", help="also run the acceptance checks")
    return p


def load_config(args) -> RunConfig:
    values = load_file(args.config) if args.config else {}
    for item in args.set:
        k, v = parse_assignment(item)
        values[k] = v
    for key, attr in (("output.format", "format"), ("output.path", "output"), ("seed", "seed"), ("jobs", "jobs")):
        if getattr(args, attr) is not None:
            values[key] = getattr(args, attr)
    return build_config(values)


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        inputs, results, rows, warnings = COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"configuration error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"numerical nonconvergence: {exc} (best value {exc.value}, error {exc.error})", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if cfg.output_format == "csv":
        text = report.to_csv(rows)
    else:
        text = report.dumps(report.make_report(args.command, cfg.echo(), report.to_plain(inputs), results, warnings))
    _emit(text, cfg)
    if args.command == "verify" and not results["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
