"""Executable invariant suite behind ``hardybloch verify``.

Every check is a pure function of the run configuration (tolerances, region,
seed) and returns a ``Check`` holding the measured quantity and the bound it
was held to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import exprlang
from .config import RunConfig
from .core import GALLERY_EXPR, HoloFun, SearchRegion, gallery_symbol, linear_combination, region_points
from .criteria import (
    NONVANISHING,
    OBSTRUCTED,
    boundary_vanishing_check,
    compactness_probe,
    criterion_m1,
    criterion_m2,
    growth_constant_estimate,
)
from .ops import (
    OperatorKind,
    apply,
    bloch_seminorm,
    extremal_fw,
    extremal_identity,
    extremal_statistic,
    ftc_identity_check,
    two_leg_path,
)
from .quad import (
    DEFAULT_HEIGHTS,
    cauchy_derivative,
    hardy_norm,
    line_l2,
    segment_integral,
)
from .rng import sample_points

GALLERY = ("zero", "const:1", "cayley", "inv", "exp_iz", "exp_isqrtz")
SYMBOL_EXPRS = tuple(GALLERY_EXPR.values()) + ("2", "z^2-3*z+1", "log(z)", "sin(z)/(z+i)", "exp(i*z)^3*(z+2*i)", "z^(1/2)")
# nine extremal centres spanning Im w in [0.25, 4] and Re w in [-3, 3]
FW_POINTS = (1j, 2j, 0.5j, 3 + 1j, -3 + 0.25j, 4j, 1.5 + 0.25j, -1 + 3j, 2 + 0.5j)


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    passed: bool
    measured: Optional[float] = None
    bound: Optional[float] = None
    detail: str = ""


REGISTRY: list[tuple[str, str, Callable[[RunConfig], Check]]] = []


def check(module: str, name: str):
    def wrap(fn):
        REGISTRY.append((module, name, fn))
        return fn

    return wrap


def _result(module, name, measured, bound, detail="", passed=None):
    measured = float(measured)
    if passed is None:
        passed = math.isfinite(measured) and measured <= bound
    return Check(module, name, bool(passed), measured, None if bound is None else float(bound), detail)


def _rel(a, b):
    return abs(a - b) / (1 + abs(b))


# ---------------------------------------------------------------- core


@check("core", "exp_iz modulus equals exp(-y) on the region grid")
def _exp_iz_modulus(cfg):
    pts = np.array([p.z for p in region_points(cfg.region)])
    v = np.abs(gallery_symbol("exp_iz").fn(pts))
    err = np.max(np.abs(v - np.exp(-pts.imag)) / np.maximum(np.exp(-pts.imag), 1e-300))
    return _result("core", "exp_iz modulus equals exp(-y) on the region grid", err, 1e-12)


@check("core", "cayley maps into the unit disc")
def _cayley(cfg):
    g = gallery_symbol("cayley")
    moderate = SearchRegion(1e-3, 1e3, 1e3, 31, 65)
    zm = np.array([p.z for p in region_points(moderate)])
    strict = float(np.max(np.abs(g.fn(zm))))
    za = np.array([p.z for p in region_points(cfg.region)])
    weak = float(np.max(np.abs(g.fn(za))))
    ok = strict < 1 and weak <= 1
    return _result("core", "cayley maps into the unit disc", strict, 1.0,
                   f"max |g| = {strict:.17g} (moderate grid), {weak:.17g} (configured grid)", ok)


@check("core", "gallery symbols evaluate to finite values")
def _gallery_total(cfg):
    za = np.array([p.z for p in region_points(cfg.region)])
    bad = [s for s in GALLERY if not np.all(np.isfinite(gallery_symbol(s).fn(za)))]
    return _result("core", "gallery symbols evaluate to finite values", len(bad), 0, ", ".join(bad))


@check("core", "region_points is pure")
def _region_pure(cfg):
    a, b = region_points(cfg.region), region_points(cfg.region)
    n = cfg.region.x_grid * cfg.region.y_grid
    ok = a == b and len(a) == n
    return _result("core", "region_points is pure", 0 if ok else 1, 0, f"{len(a)} points")


# ---------------------------------------------------------------- exprlang


@check("exprlang", "print then parse reproduces the AST")
def _roundtrip(cfg):
    bad = [s for s in SYMBOL_EXPRS if exprlang.parse(exprlang.to_text(exprlang.parse(s))) != exprlang.parse(s)]
    return _result("exprlang", "print then parse reproduces the AST", len(bad), 0, ", ".join(bad))


@check("exprlang", "symbolic derivative matches Cauchy derivative")
def _sym_vs_cauchy(cfg):
    pts = sample_points(cfg.seed, 100)
    worst = 0.0
    for s in SYMBOL_EXPRS:
        f = exprlang.expr_function(s)
        d_sym = np.asarray(f.deriv(pts))
        d_num = cauchy_derivative(f, pts, 1, cfg.quad)
        worst = max(worst, float(np.max(np.abs(d_sym - d_num) / (1 + np.abs(d_sym)))))
    return _result("exprlang", "symbolic derivative matches Cauchy derivative", worst, 1e-8)


@check("exprlang", "gallery expressions evaluate everywhere on the grid")
def _expr_total(cfg):
    za = np.array([p.z for p in region_points(cfg.region)])
    bad = []
    for s in GALLERY_EXPR.values():
        e = exprlang.parse(s)
        try:
            ok = np.all(np.isfinite(exprlang.evaluate(e, za))) and np.all(np.isfinite(exprlang.evaluate(exprlang.differentiate(e), za)))
        except ArithmeticError:
            ok = False
        if not ok:
            bad.append(s)
    return _result("exprlang", "gallery expressions evaluate everywhere on the grid", len(bad), 0, ", ".join(bad))


@check("exprlang", "syntax errors report their offset")
def _syntax(cfg):
    try:
        exprlang.parse("z^^2")
    except exprlang.ParseError as exc:
        return _result("exprlang", "syntax errors report their offset", abs(exc.position - 2), 0, str(exc))
    return _result("exprlang", "syntax errors report their offset", 1, 0, "no error raised")


# ---------------------------------------------------------------- quad


def _integrand(z):
    return np.exp(1j * z) / (z + 1j) ** 2


@check("quad", "segment integral is antisymmetric")
def _antisym(cfg):
    pts = sample_points(cfg.seed + 1, 20)
    worst = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        worst = max(worst, abs(segment_integral(_integrand, a, b, cfg.quad).value + segment_integral(_integrand, b, a, cfg.quad).value))
    return _result("quad", "segment integral is antisymmetric", worst, 1e-10)


@check("quad", "segment integral is additive")
def _additive(cfg):
    pts = sample_points(cfg.seed + 2, 21)
    worst = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        whole = segment_integral(_integrand, a, b, cfg.quad).value
        mid = 0.5 * (a + b)
        split = segment_integral(_integrand, a, mid, cfg.quad).value + segment_integral(_integrand, mid, b, cfg.quad).value
        worst = max(worst, abs(whole - split))
    return _result("quad", "segment integral is additive", worst, 1e-10)


@check("quad", "Cauchy derivative of order 0 reproduces f")
def _cauchy0(cfg):
    pts = sample_points(cfg.seed + 3, 100)
    worst = 0.0
    for s in GALLERY:
        f = gallery_symbol(s)
        worst = max(worst, float(np.max(np.abs(cauchy_derivative(f, pts, 0, cfg.quad) - f.fn(pts)))))
    return _result("quad", "Cauchy derivative of order 0 reproduces f", worst, 1e-12)


@check("quad", "Cauchy derivative is radius independent")
def _cauchy_radius(cfg):
    pts = sample_points(cfg.seed + 4, 100)
    worst = 0.0
    for s in GALLERY:
        f = gallery_symbol(s)
        for n in (1, 2):
            a = cauchy_derivative(f, pts, n, cfg.quad, ratio=0.25)
            b = cauchy_derivative(f, pts, n, cfg.quad, ratio=0.5)
            worst = max(worst, float(np.max(np.abs(a - b) / (1 + np.abs(b)))))
    return _result("quad", "Cauchy derivative is radius independent", worst, 1e-9)


@check("quad", "line integral of |f_i|^2 matches the closed form")
def _line_closed(cfg):
    f = extremal_fw(1j)
    worst = 0.0
    for y in (1e-3, 0.1, 1.0, 10.0):
        worst = max(worst, abs(line_l2(f, y, cfg.quad).value - 1 / (2 * (y + 1) ** 3)) / (1 / (2 * (y + 1) ** 3)))
    return _result("quad", "line integral of |f_i|^2 matches the closed form", worst, 1e-8)


def fw_norms(cfg):
    return [hardy_norm(extremal_fw(w), w.imag * DEFAULT_HEIGHTS, cfg.quad, center=w.real).value for w in FW_POINTS]


@check("quad", "Hardy norm of f_w does not depend on w")
def _fw_spread(cfg):
    v = fw_norms(cfg)
    spread = (max(v) - min(v)) / float(np.mean(v))
    return _result("quad", "Hardy norm of f_w does not depend on w", spread, 0.01)


@check("quad", "Hardy norm is monotone in the height set")
def _hardy_mono(cfg):
    f = linear_combination([(1, extremal_fw(1j)), (0.5j, extremal_fw(2 + 0.5j))])
    small = hardy_norm(f, np.logspace(-1, 2, 7), cfg.quad).value
    large = hardy_norm(f, np.logspace(-4, 3, 41), cfg.quad).value
    return _result("quad", "Hardy norm is monotone in the height set", small - large, 0.0)


# ---------------------------------------------------------------- ops


@check("ops", "operator images differentiate to their integrands")
def _ops_deriv(cfg):
    pts = sample_points(cfg.seed + 5, 20, y_range=(0.2, 5.0))
    g, f = gallery_symbol("cayley"), extremal_fw(1 + 2j)
    worst = 0.0
    for kind in (OperatorKind.JG, OperatorKind.IG):
        z0 = 1j
        F = lambda z, kind=kind: np.array([apply(kind, g, f, z0, v, cfg.quad).value for v in np.ravel(z)])  # noqa: E731
        H = HoloFun(lambda z, F=F: F(z).reshape(np.shape(z)))
        exact = (f.fn(pts) * g.deriv(pts)) if kind is OperatorKind.JG else (f.deriv(pts) * g.fn(pts))
        num = np.array([cauchy_derivative(H, p, 1, cfg.quad) for p in pts])
        worst = max(worst, float(np.max(np.abs(num - exact) / (1 + np.abs(exact)))))
    return _result("ops", "operator images differentiate to their integrands", worst, 1e-7)


@check("ops", "operator values are path independent")
def _path(cfg):
    pts = sample_points(cfg.seed + 6, 20)
    worst = 0.0
    for s in ("exp_iz", "cayley", "exp_isqrtz"):
        g = gallery_symbol(s)
        f = extremal_fw(1j)
        for kind in (OperatorKind.JG, OperatorKind.IG):
            for z in pts:
                a = apply(kind, g, f, 1j, z, cfg.quad).value
                b = apply(kind, g, f, 1j, z, cfg.quad, via=two_leg_path(1j, z)).value
                worst = max(worst, abs(a - b))
    return _result("ops", "operator values are path independent", worst, 1e-9)


@check("ops", "extremal identities hold pointwise")
def _extremal(cfg):
    ws = sample_points(cfg.seed + 7, 50)
    worst = 0.0
    for k, w in enumerate(ws):
        g = gallery_symbol(GALLERY[k % len(GALLERY)])
        for kind in (OperatorKind.JG, OperatorKind.IG):
            a, b = extremal_statistic(kind, g, w, cfg.quad), extremal_identity(kind, g, w, cfg.quad)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300) if b else abs(a))
    return _result("ops", "extremal identities hold pointwise", worst, 1e-12)


@check("ops", "operators are linear in f")
def _linear(cfg):
    pts = sample_points(cfg.seed + 8, 10)
    f1, f2 = extremal_fw(1j), extremal_fw(-1 + 0.5j)
    al, be = 0.7 - 0.2j, -1.3 + 0.4j
    combo = linear_combination([(al, f1), (be, f2)])
    g = gallery_symbol("exp_isqrtz")
    worst = 0.0
    for kind in OperatorKind:
        for z in pts:
            lhs = apply(kind, g, combo, 1j, z, cfg.quad).value
            rhs = al * apply(kind, g, f1, 1j, z, cfg.quad).value + be * apply(kind, g, f2, 1j, z, cfg.quad).value
            worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    return _result("ops", "operators are linear in f", worst, 1e-9)


@check("ops", "Bloch seminorm does not decrease under refinement")
def _bloch_mono(cfg):
    worst = 0.0
    for s in ("inv", "cayley", "exp_iz", "exp_isqrtz"):
        g = gallery_symbol(s)
        a = bloch_seminorm(g, cfg.region, cfg.quad).value
        b = bloch_seminorm(g, cfg.region.refined(2), cfg.quad).value
        worst = max(worst, (a - b) / max(a, 1e-300))
    return _result("ops", "Bloch seminorm does not decrease under refinement", worst, 1e-9)


@check("ops", "J_g f + I_g f = g f - f(z0) g(z0)")
def _ftc(cfg):
    xs = np.linspace(-2, 2, 5)
    ys = np.logspace(-1, 1, 5)
    sample = [complex(x, y) for y in ys for x in xs]
    worst = 0.0
    for s in ("cayley", "exp_iz"):
        for w in (1j, 1 + 2j):
            worst = max(worst, ftc_identity_check(gallery_symbol(s), extremal_fw(w), 1j, sample, cfg.quad))
    return _result("ops", "J_g f + I_g f = g f - f(z0) g(z0)", worst, 1e-7)


# ---------------------------------------------------------------- criteria


@check("criteria", "criteria are invariant under horizontal translation")
def _translation(cfg):
    c = 2.5
    r = cfg.region
    shifted = SearchRegion(r.y_min, r.y_max, r.x_max, r.y_grid, r.x_grid, r.x_center - c)
    worst = 0.0
    for s in ("cayley", "inv", "exp_iz", "exp_isqrtz"):
        g = gallery_symbol(s)
        for crit in (criterion_m1, criterion_m2):
            a = crit(g, r, cfg.quad)
            b = crit(g.shifted(c), shifted, cfg.quad)
            if a.divergent != b.divergent:
                worst = math.inf
            elif a.finite:
                worst = max(worst, abs(a.value - b.value) / max(abs(a.value), 1e-300) if a.value else abs(b.value))
    return _result("criteria", "criteria are invariant under horizontal translation", worst, 1e-10)


def vanishing_reports(cfg):
    return {s: boundary_vanishing_check(gallery_symbol(s), "m1", cfg.region, cfg.quad, cfg.radii) for s in GALLERY}


@check("criteria", "boundary sups are nonincreasing below r = 1/2")
def _monotone_window(cfg):
    worst = 0.0
    for rep in vanishing_reports(cfg).values():
        s = [v for r, v in zip(rep.radii, rep.sups) if r < 0.5]
        for a, b in zip(s[:-1], s[1:]):
            worst = max(worst, b - a)
    return _result("criteria", "boundary sups are nonincreasing below r = 1/2", worst, 0.0)


@check("criteria", "nonvanishing boundary limit implies an obstructed probe")
def _dichotomy(cfg):
    lines, bad = [], 0
    for s, rep in vanishing_reports(cfg).items():
        if rep.verdict == NONVANISHING:
            p = compactness_probe("jg", gallery_symbol(s), 0.0, cfg.probe_levels, cfg.region, cfg.quad, cfg.jobs)
            lines.append(f"{s}: {p.verdict}")
            bad += p.verdict != OBSTRUCTED
    return _result("criteria", "nonvanishing boundary limit implies an obstructed probe", bad, 0, "; ".join(lines))


@check("criteria", "probe lower statistic matches its closed form")
def _probe_identity(cfg):
    worst = 0.0
    for s in ("exp_iz", "exp_isqrtz", "cayley"):
        for kind in ("jg", "ig"):
            g = gallery_symbol(s)
            for n in range(1, cfg.probe_levels + 1):
                w = 1j * 2.0 ** -n
                a, b = extremal_statistic(kind, g, w, cfg.quad), extremal_identity(kind, g, w, cfg.quad)
                worst = max(worst, abs(a - b) / b if b else abs(a))
    return _result("criteria", "probe lower statistic matches its closed form", worst, 1e-12)


@check("criteria", "growth constants are dilation invariant")
def _growth_dilation(cfg):
    worst = 0.0
    for n in (0, 1, 2):
        vals = [growth_constant_estimate(extremal_fw(w), n, cfg.region, cfg.quad).constant for w in (1j, 4j, 0.25j)]
        worst = max(worst, (max(vals) - min(vals)) / float(np.mean(vals)))
    return _result("criteria", "growth constants are dilation invariant", worst, 0.02)


# ---------------------------------------------------------------- cli


@check("cli", "JSON reports round-trip byte for byte")
def _json_roundtrip(cfg):
    from . import report

    g = gallery_symbol("exp_iz")
    rep = report.make_report("verify", cfg.echo(), {}, {"m1": criterion_m1(g, cfg.region, cfg.quad), "x": [math.inf, -0.0, 1e-300, 1 / 3, 2 + 1j]})
    a = report.dumps(rep)
    b = report.dumps(report.loads(a))
    return _result("cli", "JSON reports round-trip byte for byte", 0 if a == b else 1, 0)


@check("cli", "CSV and JSON carry identical numbers")
def _csv_json(cfg):
    from . import report

    rows = [{"r": r, "s": s} for r, s in zip(*_small_vanishing(cfg))]
    text_json = report.dumps({"rows": rows})
    text_csv = report.to_csv(rows)
    back = report.loads(text_json)["rows"]
    csv_lines = text_csv.split("\r\n")[1:-1]
    same = all(line == f"{report.fmt_float(r['r'])},{report.fmt_float(r['s'])}" for line, r in zip(csv_lines, back))
    return _result("cli", "CSV and JSON carry identical numbers", 0 if same and len(csv_lines) == len(rows) else 1, 0)


def _small_vanishing(cfg):
    rep = boundary_vanishing_check(gallery_symbol("exp_isqrtz"), "m1", cfg.region, cfg.quad, 8)
    return rep.radii, rep.sups


@check("cli", "exit codes follow the contract")
def _exit_codes(cfg):
    import contextlib
    import io

    from .cli import main

    sink = io.StringIO()
    with contextlib.redirect_stderr(sink), contextlib.redirect_stdout(sink):
        codes = (
            main(["hardy-norm", "--function-expr", "0"]),
            main(["criteria", "--symbol", "nope"]),
            main(["apply", "--op", "jg", "--symbol", "exp_iz", "--function", "fw:0,1", "--z", "1,2", "--set", "quad.max_depth=1", "--set", "quad.gauss_order=2"]),
        )
    ok = codes == (0, 2, 3)
    return _result("cli", "exit codes follow the contract", 0 if ok else 1, 0, f"codes {codes}")


def run_checks(cfg: RunConfig, modules: Optional[list[str]] = None, acceptance: bool = False) -> list[Check]:
    from .acceptance import ACCEPTANCE

    entries = list(REGISTRY)
    if acceptance:
        entries += [("acceptance", name, fn) for name, fn in ACCEPTANCE]
    out = []
    for module, name, fn in entries:
        if modules and module not in modules:
            continue
        try:
            out.append(fn(cfg))
        except Exception as exc:  # a crashing check is a failing check
            out.append(Check(module, name, False, None, None, f"{type(exc).__name__}: {exc}"))
    return out
