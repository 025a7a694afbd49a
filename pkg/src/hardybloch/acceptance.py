"""Acceptance checks, one per numbered criterion, each at its stated
tolerance.  Shared by ``hardybloch verify --acceptance`` and the test suite.
Report reproducibility (criterion 12) compares two whole verify runs and
lives in the test suite."""

from __future__ import annotations

import math

import numpy as np

from . import exprlang
from .config import RunConfig
from .core import GALLERY_EXPR, Strip, gallery_symbol
from .criteria import (
    DECAYING,
    NONVANISHING,
    OBSTRUCTED,
    VANISHING,
    boundary_vanishing_check,
    compactness_probe,
    criterion_m1,
    criterion_m2,
    growth_constant_estimate,
    strip_decay_check,
)
from .ops import SQRT_PI, OperatorKind, bloch_seminorm, extremal_fw, extremal_identity, extremal_statistic, ftc_identity_check
from .quad import cauchy_derivative
from .rng import sample_points
from .verify import FW_POINTS, GALLERY, Check, fw_norms

HALF_SQRT2 = 1 / math.sqrt(2)
M1_EXP_IZ = math.sqrt(0.5) * math.exp(-0.5)
PROBE_LIMIT = 1 / (8 * SQRT_PI)


def _check(n, title, passed, measured=None, bound=None, detail=""):
    return Check("acceptance", f"{n}. {title}", bool(passed), None if measured is None else float(measured),
                 None if bound is None else float(bound), detail)


def c1_extremal_norm(cfg: RunConfig) -> Check:
    v = fw_norms(cfg)
    dev = max(abs(x - HALF_SQRT2) / HALF_SQRT2 for x in v)
    return _check(1, "extremal-norm constancy", dev <= 0.01 and len(set(FW_POINTS)) == 9, dev, 0.01,
                  f"norms in [{min(v):.6f}, {max(v):.6f}]")


def c2_derivatives(cfg: RunConfig) -> Check:
    pts = sample_points(cfg.seed, 100)
    sources = dict(GALLERY_EXPR, **{"const:1": "1"})
    worst_sym = worst_rad = 0.0
    for src in sources.values():
        f = exprlang.expr_function(src)
        d_sym = np.asarray(f.deriv(pts)) + np.zeros_like(pts)
        d_num = cauchy_derivative(f, pts, 1, cfg.quad)
        worst_sym = max(worst_sym, float(np.max(np.abs(d_sym - d_num) / (1 + np.abs(d_sym)))))
        a = cauchy_derivative(f, pts, 1, cfg.quad, ratio=0.25)
        worst_rad = max(worst_rad, float(np.max(np.abs(a - d_num) / (1 + np.abs(d_num)))))
    ok = worst_sym <= 1e-8 and worst_rad <= 1e-9
    return _check(2, "derivative cross-check", ok, worst_sym, 1e-8, f"radius spread {worst_rad:.3e} (bound 1e-9)")


def c3_ftc(cfg: RunConfig) -> Check:
    xs = np.linspace(-2, 2, 5)
    ys = np.logspace(-1, 1, 5)
    sample = [complex(x, y) for y in ys for x in xs]
    worst = max(
        ftc_identity_check(gallery_symbol(s), extremal_fw(w), 1j, sample, cfg.quad)
        for s in ("cayley", "exp_iz") for w in (1j, 1 + 2j)
    )
    return _check(3, "FTC operator identity", worst <= 1e-7, worst, 1e-7)


def c4_extremal_identities(cfg: RunConfig) -> Check:
    ws = sample_points(cfg.seed + 7, 50)
    worst = 0.0
    for k, w in enumerate(ws):
        g = gallery_symbol(GALLERY[k % len(GALLERY)])
        for kind in (OperatorKind.JG, OperatorKind.IG):
            a, b = extremal_statistic(kind, g, w, cfg.quad), extremal_identity(kind, g, w, cfg.quad)
            worst = max(worst, abs(a - b) / b if b else abs(a))
    return _check(4, "extremal identities", worst <= 1e-12, worst, 1e-12)


def c5_m1_landmark(cfg: RunConfig) -> Check:
    est = criterion_m1(gallery_symbol("exp_iz"), cfg.region, cfg.quad)
    ok = abs(est.value - M1_EXP_IZ) <= 1e-3 and abs(est.argmax.y - 0.5) <= 0.02 and not est.divergent
    return _check(5, "M1 landmark", ok, est.value, M1_EXP_IZ, f"argmax {est.argmax}")


def c6_bloch_landmark(cfg: RunConfig) -> Check:
    est = bloch_seminorm(gallery_symbol("inv"), cfg.region, cfg.quad)
    ok = abs(est.value - 0.25) <= 1e-4 and abs(est.argmax.x) <= 0.02 and abs(est.argmax.y - 1) <= 0.02
    return _check(6, "Bloch landmark", ok, est.value, 0.25, f"argmax {est.argmax}")


def c7_divergence(cfg: RunConfig) -> Check:
    flags = {s: criterion_m2(gallery_symbol(s), cfg.region, cfg.quad) for s in ("const:1", "exp_iz")}
    ok = all(e.divergent for e in flags.values()) and cfg.region.y_min <= 1e-6
    detail = "; ".join(f"{s}: divergent={e.divergent} value={e.value:.6g}" for s, e in flags.items())
    return _check(7, "divergence detection", ok, None, None, detail)


def c8a_vanishing(cfg: RunConfig) -> Check:
    a = boundary_vanishing_check(gallery_symbol("exp_iz"), "m1", cfg.region, cfg.quad, cfg.radii)
    ratio = a.sups[-1] / a.sups[0]
    detail = f"exp_iz: {a.verdict}, s(r_last)/s(r_0) = {ratio:.4g} over {len(a.radii)} radii"
    return _check("8a", "boundary vanishing for exp_iz", a.verdict == VANISHING, ratio, 1e-3, detail)


def c8b_nonvanishing(cfg: RunConfig) -> Check:
    b = boundary_vanishing_check(gallery_symbol("exp_isqrtz"), "m1", cfg.region, cfg.quad, cfg.radii)
    lim = math.nan if b.limit_estimate is None else b.limit_estimate
    ok = b.verdict == NONVANISHING and abs(lim - 0.5) <= 0.01
    return _check("8b", "boundary nonvanishing for exp_isqrtz", ok, lim, 0.5, f"exp_isqrtz: {b.verdict}")


def c9_probe(cfg: RunConfig) -> Check:
    p = compactness_probe("jg", gallery_symbol("exp_isqrtz"), 0.0, cfg.probe_levels, cfg.region, cfg.quad, cfg.jobs)
    q = compactness_probe("jg", gallery_symbol("exp_iz"), 0.0, cfg.probe_levels, cfg.region, cfg.quad, cfg.jobs)
    last = p.levels[-1].lower
    dev = abs(last - PROBE_LIMIT) / PROBE_LIMIT
    L16 = next(l.lower for l in q.levels if l.n == 16) if len(q.levels) >= 16 else math.nan
    ok = p.verdict == OBSTRUCTED and dev <= 0.05 and q.verdict == DECAYING and L16 < 1e-3
    detail = f"exp_isqrtz: {p.verdict}, L = {last:.6f}; exp_iz: {q.verdict}, L(w_16) = {L16:.3e}"
    return _check(9, "compactness probe dichotomy", ok, dev, 0.05, detail)


def c10_growth(cfg: RunConfig) -> Check:
    f = extremal_fw(1j)
    reps = [growth_constant_estimate(f, n, cfg.region, cfg.quad) for n in (0, 1, 2)]
    worst = max(r.stability for r in reps)
    ok = worst < 0.05 and reps[0].constant >= 0.199
    detail = ", ".join(f"C{r.n} = {r.constant:.6f}" for r in reps)
    return _check(10, "growth-constant stability", ok, worst, 0.05, detail)


def c11_strip(cfg: RunConfig) -> Check:
    r = strip_decay_check(extremal_fw(1j), Strip(0.5, 2.0), cfg.quad)
    ok = r.verdict == DECAYING and r.sups[-1] < 1e-6
    return _check(11, "strip decay", ok, r.sups[-1], 1e-6, f"{r.verdict}, sups {[f'{v:.3e}' for v in r.sups]}")


ACCEPTANCE = [
    ("1. extremal-norm constancy", c1_extremal_norm),
    ("2. derivative cross-check", c2_derivatives),
    ("3. FTC operator identity", c3_ftc),
    ("4. extremal identities", c4_extremal_identities),
    ("5. M1 landmark", c5_m1_landmark),
    ("6. Bloch landmark", c6_bloch_landmark),
    ("7. divergence detection", c7_divergence),
    ("8a. boundary vanishing for exp_iz", c8a_vanishing),
    ("8b. boundary nonvanishing for exp_isqrtz", c8b_nonvanishing),
    ("9. compactness probe dichotomy", c9_probe),
    ("10. growth-constant stability", c10_growth),
    ("11. strip decay", c11_strip),
]
