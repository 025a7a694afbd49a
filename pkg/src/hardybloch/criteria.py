"""Boundedness and compactness statistics for J_g and I_g acting from H2 to
the Bloch space, and the experiments built on them."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ConfigError, HoloFun, Point, SearchRegion, Strip, SupEstimate
from .ops import (
    DEFAULT_Z0,
    OperatorImage,
    OperatorKind,
    bloch_norm,
    bloch_seminorm,
    extremal_fw,
    extremal_identity,
    extremal_statistic,
)
from .quad import DEFAULT_HEIGHTS, QuadConfig, derivative, derivative_fn, hardy_norm
from .search import TAU, explore, sup_search

VANISHING, NONVANISHING, INCONCLUSIVE = "VANISHING", "NONVANISHING", "INCONCLUSIVE"
DECAYING, OBSTRUCTED = "DECAYING", "OBSTRUCTED"
BOUNDED, UNBOUNDED_EVIDENCE = "BOUNDED", "UNBOUNDED-EVIDENCE"

# finite decision rules for the numeric limits
VANISH_RATIO = 1e-3
WINDOW = 5
BAND = 0.05
DELTA_FLOOR = 1e-3
DEFAULT_RADII = 21
FLOOR_DEPTH = 1e-3


def m1_statistic(g: HoloFun, cfg: QuadConfig = QuadConfig()):
    dg = derivative_fn(g, cfg)
    return lambda z: np.sqrt(z.imag) * np.abs(dg(z))


def m2_statistic(g: HoloFun, cfg: QuadConfig = QuadConfig()):
    return lambda z: np.abs(g.fn(z)) / np.sqrt(z.imag)


def _statistic(g, form, cfg):
    form = str(form).lower()
    if form == "m1":
        return m1_statistic(g, cfg)
    if form == "m2":
        return m2_statistic(g, cfg)
    raise ConfigError(f"unknown statistic {form!r}; expected m1 or m2", "which")


def criterion_m1(g: HoloFun, region: SearchRegion = SearchRegion(), cfg: QuadConfig = QuadConfig()) -> SupEstimate:
    """sup (Im z)^{1/2} |g'(z)| -- finite iff J_g is bounded."""
    return sup_search(m1_statistic(g, cfg), region)


def criterion_m2(g: HoloFun, region: SearchRegion = SearchRegion(), cfg: QuadConfig = QuadConfig()) -> SupEstimate:
    """sup |g(z)| / (Im z)^{1/2} -- finite iff I_g is bounded."""
    return sup_search(m2_statistic(g, cfg), region)


def criterion_for(kind: OperatorKind, g, region=SearchRegion(), cfg=QuadConfig()) -> SupEstimate:
    if kind is OperatorKind.JG:
        return criterion_m1(g, region, cfg)
    if kind is OperatorKind.IG:
        return criterion_m2(g, region, cfg)
    raise ConfigError("criteria are defined for jg and ig only", "op")


# ---------------------------------------------------------------------------
# boundary vanishing


@dataclass(frozen=True)
class VanishingReport:
    form: str
    radii: tuple[float, ...]
    sups: tuple[float, ...]
    verdict: str
    limit_estimate: Optional[float]
    y_floor: float


def _window_level(values):
    """Mean of the window if its spread is within BAND of that mean."""
    w = np.asarray(values, dtype=float)
    level = float(w.mean())
    if level > 0 and math.isfinite(level) and (w.max() - w.min()) <= BAND * level:
        return level
    return None


def boundary_vanishing_check(
    g: HoloFun,
    form: str = "m1",
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    radii: int = DEFAULT_RADII,
) -> VanishingReport:
    """s(r_k) = sup over {Im z < r_k} of the statistic, r_k = 2^-k.

    All s(r_k) come from one sweep over heights in [y_floor, 1] that
    contains every r_k, so s is nonincreasing in k by construction.  The
    sweep reaches y_floor = FLOOR_DEPTH * r_last below the smallest radius.
    """
    if radii < WINDOW + 1:
        raise ConfigError(f"need at least {WINDOW + 1} radii, got {radii}", "vanishing.radii")
    stat = _statistic(g, form, cfg)
    rs = 2.0 ** -np.arange(radii)
    y_floor = rs[-1] * FLOOR_DEPTH
    n = int(math.ceil(10 * math.log10(rs[0] / y_floor))) + 1
    ys = np.union1d(rs, np.logspace(math.log10(y_floor), math.log10(rs[0]), n))
    xs = region.abscissae()
    asc = rs[::-1]

    def labels(x, y):
        return np.searchsorted(asc, y * (1 - 1e-12))

    cloud = explore(
        stat, xs, ys, labels,
        (region.x_center - region.x_max, region.x_center + region.x_max, y_floor, rs[0]),
        top_k=2, x_center=region.x_center,
    )
    sups = []
    for r in rs:
        mask = cloud.y <= r * (1 + 1e-12)
        sups.append(max(float(cloud.v[mask].max()), 0.0))

    tail = sups[-WINDOW:]
    nonincreasing = all(b <= a for a, b in zip(tail[:-1], tail[1:]))
    level = _window_level(tail)
    limit = None
    if sups[-1] <= VANISH_RATIO * sups[0] and nonincreasing:
        verdict = VANISHING
    elif level is not None:
        verdict, limit = NONVANISHING, level
    else:
        verdict = INCONCLUSIVE
    return VanishingReport(str(form).lower(), tuple(float(r) for r in rs), tuple(sups), verdict, limit, float(y_floor))


# ---------------------------------------------------------------------------
# compactness probe


@dataclass(frozen=True)
class ProbeLevel:
    n: int
    w: Point
    lower: float
    lower_eval: float
    full_norm: float
    divergent: bool
    argmax: Optional[Point]
    error: Optional[str] = None


@dataclass(frozen=True)
class CompactnessProbe:
    kind: str
    levels: tuple[ProbeLevel, ...]
    verdict: str
    delta_floor: float = DELTA_FLOOR


def _probe_level(kind, g, n, x_anchor, region, cfg):
    w = complex(x_anchor, 2.0 ** -n)
    lower = extremal_identity(kind, g, w, cfg)
    lower_eval = extremal_statistic(kind, g, w, cfg)
    try:
        F = OperatorImage(kind, g, extremal_fw(w), DEFAULT_Z0)
        bn = bloch_norm(F, region, cfg, seeds=[w], strip_density=4)
    except (ArithmeticError, ValueError) as exc:
        return ProbeLevel(n, Point.of(w), lower, lower_eval, math.nan, False, None, str(exc))
    return ProbeLevel(
        n, Point.of(w), lower, lower_eval,
        bn.point_value + bn.seminorm.value, bn.divergent, bn.seminorm.argmax,
    )


def compactness_probe(
    kind,
    g: HoloFun,
    x_anchor: float = 0.0,
    levels: int = 16,
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    jobs: int = 1,
) -> CompactnessProbe:
    """Push f_{w_n}, w_n = x_anchor + i 2^-n, through the operator.

    OBSTRUCTED: the closed-form lower statistic L(w_n) settles (last five
    levels within 5%) at or above DELTA_FLOOR, so ||L f_{w_n}|| cannot
    tend to 0.  DECAYING: the Bloch norms fall below 1e-3 of the first one,
    or L(w_n) has dropped below DELTA_FLOOR with nonincreasing norms over
    the last five levels.
    """
    kind = OperatorKind.parse(kind) if not isinstance(kind, OperatorKind) else kind
    if kind is OperatorKind.MG:
        raise ConfigError("the probe is defined for jg and ig only", "op")
    if levels < 4:
        raise ConfigError(f"probe needs at least 4 levels, got {levels}", "probe.levels")
    ns = range(1, levels + 1)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            rows = list(ex.map(lambda n: _probe_level(kind, g, n, x_anchor, region, cfg), ns))
    else:
        rows = [_probe_level(kind, g, n, x_anchor, region, cfg) for n in ns]

    L = [r.lower for r in rows]
    full = [r.full_norm for r in rows]
    tail_L = L[-WINDOW:]
    tail_full = full[-WINDOW:]
    level = _window_level(tail_L)
    if level is not None and min(tail_L) >= DELTA_FLOOR:
        verdict = OBSTRUCTED
    elif all(math.isfinite(v) for v in full) and (
        full[-1] <= VANISH_RATIO * full[0]
        or (L[-1] < DELTA_FLOOR and all(b <= a * (1 + 1e-9) for a, b in zip(tail_full[:-1], tail_full[1:])))
    ):
        verdict = DECAYING
    else:
        verdict = INCONCLUSIVE
    return CompactnessProbe(kind.value, tuple(rows), verdict)


# ---------------------------------------------------------------------------
# boundedness certificate


@dataclass(frozen=True)
class WitnessRow:
    w: Point
    bloch: float
    hardy: float
    ratio: float


@dataclass(frozen=True)
class Certificate:
    kind: str
    criterion_name: str
    criterion: SupEstimate
    lower_bound: float
    lower_argmax: Point
    ratio: Optional[float]
    verdict: str
    witnesses: tuple[WitnessRow, ...]
    half_scale_lower_bound: Optional[float]
    sup_abs_g: SupEstimate
    bloch_g: SupEstimate


def _w_grid(center: Point, region: SearchRegion):
    ys = np.clip(center.y * np.array([0.25, 0.5, 1.0, 2.0, 4.0]), region.y_min, region.y_max)
    xs = np.clip(
        center.x + center.y * np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
        region.x_center - region.x_max, region.x_center + region.x_max,
    )
    seen, out = set(), []
    for y in ys:
        for x in xs:
            key = (float(x), float(y))
            if key not in seen:
                seen.add(key)
                out.append(complex(*key))
    return out


def _witness(kind, g, w, region, cfg):
    fw = extremal_fw(w)
    bn = bloch_norm(OperatorImage(kind, g, fw, DEFAULT_Z0), region, cfg, seeds=[w])
    hn = hardy_norm(fw, w.imag * DEFAULT_HEIGHTS, cfg, center=w.real)
    b = bn.point_value + bn.seminorm.value
    return WitnessRow(Point.of(w), b, hn.value, b / hn.value if hn.value > 0 else math.inf)


def _lower_bound(kind, g, crit, region, cfg, jobs):
    ws = _w_grid(crit.argmax, region)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            rows = list(ex.map(lambda w: _witness(kind, g, w, region, cfg), ws))
    else:
        rows = [_witness(kind, g, w, region, cfg) for w in ws]
    best = max(rows, key=lambda r: r.ratio)
    return best, tuple(rows)


def boundedness_certificate(
    kind,
    g: HoloFun,
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    jobs: int = 1,
) -> Certificate:
    """Criterion sup (M1 for J_g, M2 for I_g) next to an empirical lower
    bound max_w ||L f_w||_Bloch / ||f_w||_H2 over a 5x5 grid of w around the
    criterion's maximizer.  Also records sup |g| and the Bloch seminorm of g
    (membership of g in H-infinity and in the Bloch space)."""
    kind = OperatorKind.parse(kind) if not isinstance(kind, OperatorKind) else kind
    crit = criterion_for(kind, g, region, cfg)
    best, rows = _lower_bound(kind, g, crit, region, cfg, jobs)
    half = None
    if crit.finite:
        verdict = BOUNDED
    else:
        sub = region.at_scale(0.5)
        crit_half = criterion_for(kind, g, sub, cfg)
        half_best, _ = _lower_bound(kind, g, crit_half, sub, cfg, jobs)
        half = half_best.ratio
        verdict = UNBOUNDED_EVIDENCE if best.ratio > TAU * half else INCONCLUSIVE
    ratio = best.ratio / crit.value if crit.value > 0 and math.isfinite(crit.value) else None
    sup_g = sup_search(lambda z: np.abs(g.fn(z)), region)
    bloch_g = bloch_seminorm(g, region, cfg)
    return Certificate(
        kind.value, "m1" if kind is OperatorKind.JG else "m2", crit, best.ratio, best.w,
        ratio, verdict, rows, half, sup_g, bloch_g,
    )


# ---------------------------------------------------------------------------
# strip decay and growth constants


@dataclass(frozen=True)
class StripDecayReport:
    strip: Strip
    thresholds: tuple[float, ...]
    sups: tuple[float, ...]
    verdict: str


def strip_decay_check(
    f: HoloFun,
    strip: Strip,
    cfg: QuadConfig = QuadConfig(),
    thresholds: Sequence[float] = (10.0, 1e2, 1e3, 1e4),
) -> StripDecayReport:
    """sup |f| over {a <= Im z <= b, |Re z| > R} for increasing R.

    Each tail is swept over |x| in [R, 1e4 R] on both sides and refined.
    """
    ny = 1 if strip.a == strip.b else 9
    ys = np.logspace(math.log10(strip.a), math.log10(strip.b), ny)
    stat = lambda z: np.abs(f.fn(z))  # noqa: E731
    sups = []
    for R in thresholds:
        xs = R * np.logspace(0, 4, 41)
        best = 0.0
        for sign in (1.0, -1.0):
            lo, hi = (R, 1e4 * R) if sign > 0 else (-1e4 * R, -R)
            cloud = explore(
                stat, sign * xs, ys, lambda x, y: np.zeros(x.shape, dtype=int),
                (lo, hi, strip.a, strip.b), top_k=3, x_center=sign * R,
            )
            best = max(best, float(cloud.v.max()))
        sups.append(best)
    monotone = all(b <= a for a, b in zip(sups[:-1], sups[1:]))
    verdict = DECAYING if monotone and sups[-1] <= VANISH_RATIO * sups[0] else INCONCLUSIVE
    return StripDecayReport(strip, tuple(float(t) for t in thresholds), tuple(sups), verdict)


@dataclass(frozen=True)
class GrowthReport:
    n: int
    hardy_norm: float
    constant: float
    argmax: Point
    refined_constant: float
    stability: float


def growth_constant_estimate(
    f: HoloFun,
    n: int,
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    center: float = 0.0,
) -> GrowthReport:
    """C_n(f) = sup (Im z)^{n+1/2} |f^(n)(z)| / ||f||_H2, on ``region`` and on
    its 2x refinement; ``stability`` is |C_refined / C - 1|."""
    if n not in (0, 1, 2):
        raise ConfigError(f"derivative order must be 0, 1 or 2, got {n}", "order")
    h = hardy_norm(f, cfg=cfg, center=center).value
    if not (h > 0 and math.isfinite(h)):
        raise ConfigError(f"growth constant needs a finite nonzero H2 norm, got {h}", "function")

    def stat(z):
        return z.imag ** (n + 0.5) * np.abs(derivative(f, z, n, cfg))

    base = sup_search(stat, region)
    fine = sup_search(stat, region.refined(2))
    c, cr = base.value / h, fine.value / h
    stab = abs(cr / c - 1) if c > 0 else 0.0
    return GrowthReport(n, h, c, base.argmax, cr, stab)
