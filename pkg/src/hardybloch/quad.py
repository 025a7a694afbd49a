"""Integration and numerical-derivative kernels.

* ``segment_integral``: globally adaptive Gauss-Legendre quadrature of a
  holomorphic integrand along a straight segment in the upper half-plane.
* ``cauchy_derivative``: f^(n)(z) from the trapezoid rule on the circle
  |zeta - z| = rho * Im z.
* ``line_l2`` / ``hardy_norm``: the horizontal-line L2 integrals behind the
  H2 norm and their supremum over heights.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .core import ConfigError, HoloFun, Level, Point, SupEstimate, as_complex

# A panel is never accepted while it is longer than this multiple of the
# distance to the real axis (a lower bound for the analyticity radius).
ANALYTIC_RATIO = 4.0
MAX_PANELS = 200_000

LINE_X0 = 16.0
LINE_X_CAP = 1e7

DEFAULT_HEIGHTS = np.logspace(-4, 3, 41)


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_depth: int = 30
    gauss_order: int = 15
    circle_nodes: int = 64
    circle_ratio: float = 0.5

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ConfigError(f"{name} must be a positive number, got {v!r}", f"quad.{name}")
        for name in ("max_depth", "gauss_order", "circle_nodes"):
            v = getattr(self, name)
            if not (isinstance(v, int) and not isinstance(v, bool) and v >= 1):
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}", f"quad.{name}")
        if not (0 < self.circle_ratio < 1):
            raise ConfigError(f"circle_ratio must lie in (0, 1), got {self.circle_ratio!r}", "quad.circle_ratio")


class NonConvergenceError(ArithmeticError):
    """Adaptive quadrature ran out of depth; carries the best estimate."""

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    converged: bool = True
    panels: int = 0


@lru_cache(maxsize=None)
def _gauss(order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    return (t + 1) / 2, w / 2


def _adaptive(fun: Callable, breaks: Sequence[float], cfg: QuadConfig):
    """Globally adaptive Gauss quadrature of ``fun`` over [breaks[0], breaks[-1]].

    Each panel is estimated by one Gauss rule and by the same rule on its
    two halves; the difference is the panel error.  The panel with the
    largest error is bisected until the summed error meets
    max(rel_tol * |total|, abs_tol).
    """
    nodes, weights = _gauss(cfg.gauss_order)

    def rule(a, b):
        # a, b: arrays of panel ends; returns Gauss estimates per panel
        h = b - a
        vals = fun((a[:, None] + h[:, None] * nodes[None, :]).ravel())
        vals = np.asarray(vals).reshape(a.size, nodes.size)
        return (vals * weights[None, :]).sum(axis=1) * h

    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    m = (a + b) / 2
    whole = rule(a, b)
    halves = rule(np.concatenate([a, m]), np.concatenate([m, b]))
    left, right = halves[: a.size], halves[a.size:]

    heap = []
    done = []
    for k in range(a.size):
        fine = left[k] + right[k]
        err = abs(fine - whole[k])
        heapq.heappush(heap, (-err, k, a[k], b[k], left[k], right[k], 0))
    counter = a.size
    total = complex(np.sum(left + right))
    total_err = float(sum(-h[0] for h in heap))
    converged = True

    while heap:
        if total_err <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
            break
        neg_err, _, pa, pb, pl, pr, depth = heapq.heappop(heap)
        if depth >= cfg.max_depth or counter > MAX_PANELS:
            done.append((-neg_err, pl + pr))
            converged = False
            continue
        pm = (pa + pb) / 2
        ends_a = np.array([pa, (pa + pm) / 2, pm, (pm + pb) / 2])
        ends_b = np.array([(pa + pm) / 2, pm, (pm + pb) / 2, pb])
        q = rule(ends_a, ends_b)
        total -= pl + pr
        total_err -= -neg_err
        for (ca, cb, coarse, cl, cr) in ((pa, pm, pl, q[0], q[1]), (pm, pb, pr, q[2], q[3])):
            e = abs(cl + cr - coarse)
            counter += 1
            heapq.heappush(heap, (-e, counter, ca, cb, cl, cr, depth + 1))
            total += cl + cr
            total_err += e

    pieces = [h[4] + h[5] for h in heap] + [d[1] for d in done]
    errs = [-h[0] for h in heap] + [d[0] for d in done]
    value = complex(math.fsum(p.real for p in pieces), math.fsum(p.imag for p in pieces))
    err = math.fsum(errs)
    if err > max(cfg.rel_tol * abs(value), cfg.abs_tol):
        converged = False
    return value, err, converged, counter


def _analytic_breaks(za: complex, zb: complex) -> list[float]:
    """Parameter breakpoints so every panel of the segment za -> zb is at
    most ANALYTIC_RATIO times the smaller endpoint height."""
    length = abs(zb - za)
    out = [0.0]
    stack = [(0.0, 1.0)]
    pieces = []
    while stack:
        s, t = stack.pop()
        ya = za.imag + s * (zb.imag - za.imag)
        yb = za.imag + t * (zb.imag - za.imag)
        if (t - s) * length <= ANALYTIC_RATIO * min(ya, yb) or len(pieces) + len(stack) > 4096:
            pieces.append((s, t))
        else:
            m = (s + t) / 2
            stack.append((m, t))
            stack.append((s, m))
    pieces.sort()
    out.extend(t for _, t in pieces)
    return out


def _endpoint(p) -> complex:
    z = as_complex(p)
    if not z.imag > 0:
        raise ValueError(f"segment endpoint {z} is not in the upper half-plane")
    return z


def segment_integral(h: Callable, start, end, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Integral of ``h(zeta) dzeta`` along the straight segment start -> end.

    ``h`` must accept complex arrays.  Raises NonConvergenceError (carrying
    the best value and error estimate) when the depth budget runs out.
    """
    za, zb = _endpoint(start), _endpoint(end)
    if za == zb:
        return QuadResult(0j, 0.0, True, 0)
    dz = zb - za
    value, err, ok, panels = _adaptive(lambda t: h(za + t * dz) * dz, _analytic_breaks(za, zb), cfg)
    if not ok:
        raise NonConvergenceError(
            f"segment {za} -> {zb} did not converge (error estimate {err:.3g})", value, err
        )
    return QuadResult(value, err, True, panels)


def path_integral(h: Callable, waypoints: Sequence, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Sum of segment integrals along a polyline."""
    pts = [_endpoint(p) for p in waypoints]
    total, err, panels = 0j, 0.0, 0
    for a, b in zip(pts[:-1], pts[1:]):
        r = segment_integral(h, a, b, cfg)
        total += r.value
        err += r.error
        panels += r.panels
    return QuadResult(total, err, True, panels)


def cauchy_derivative(f, z, n: int, cfg: QuadConfig = QuadConfig(), ratio: Optional[float] = None):
    """n-th derivative (n = 0, 1, 2) by the Cauchy integral formula.

    The circle has radius ``ratio * Im z`` (default ``cfg.circle_ratio``) and
    is sampled with ``cfg.circle_nodes`` equispaced trapezoid nodes.
    Accepts scalar or array ``z``.
    """
    if n not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {n}")
    rho = cfg.circle_ratio if ratio is None else ratio
    if not 0 < rho < 1:
        raise ValueError("circle ratio must lie in (0, 1)")
    z = as_complex(z)
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(z)
    if np.any(zz.imag <= 0):
        raise ValueError("cauchy_derivative needs points in the upper half-plane")
    N = cfg.circle_nodes
    theta = 2 * np.pi * np.arange(N) / N
    unit = np.exp(1j * theta)
    r = rho * zz.imag
    ring = zz[:, None] + r[:, None] * unit[None, :]
    fn = f.fn if isinstance(f, HoloFun) else f
    vals = np.asarray(fn(ring.ravel())).reshape(ring.shape)
    out = (vals * unit[None, :] ** (-n)).sum(axis=1) * (math.factorial(n) / N) / r ** n
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def derivative(f: HoloFun, z, n: int, cfg: QuadConfig = QuadConfig()):
    """f^(n)(z) through the exact channel where possible, else Cauchy."""
    if n not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {n}")
    if n == 0:
        return f.eval(z)
    if f.deriv is not None:
        if n == 1:
            return f.deriv(as_complex(z))
        return cauchy_derivative(f.deriv, z, n - 1, cfg)
    return cauchy_derivative(f, z, n, cfg)


def derivative_fn(f: HoloFun, cfg: QuadConfig = QuadConfig()) -> Callable:
    """Vectorized callable for f'."""
    if f.deriv is not None:
        return f.deriv
    return lambda z: cauchy_derivative(f, z, 1, cfg)


@dataclass(frozen=True)
class LineL2:
    value: float
    error: float
    extent: float
    truncated: bool
    converged: bool


def _graded_breaks(center: float, y: float, half_width: float) -> np.ndarray:
    """Breakpoints on [center - half_width, center + half_width], refined
    geometrically towards ``center`` down to spacing ~ y."""
    offs = []
    d = y
    while d < half_width:
        offs.append(d)
        d *= 2
    offs = np.array(offs + [half_width])
    return np.concatenate([center - offs[::-1], [center], center + offs])


def line_l2(f: HoloFun, y: float, cfg: QuadConfig = QuadConfig(), center: float = 0.0) -> LineL2:
    """Integral of |f(x + iy)|^2 over the real line.

    [-X0, X0] (around ``center``) is integrated first; blocks [X, 2X] on both
    sides are added, doubling X, until a block contributes less than
    rel_tol of the running total or X reaches the cap.
    """
    if not y > 0:
        raise ValueError(f"line_l2 needs y > 0, got {y}")
    fn = f.fn

    def integrand(x):
        v = fn(x + 1j * y)
        return (v.real ** 2 + v.imag ** 2).astype(float)

    ok = True
    total, err, _ok, _ = _adaptive(integrand, _graded_breaks(center, y, LINE_X0), cfg)
    total = total.real
    ok &= _ok
    X = LINE_X0
    truncated = False
    while True:
        lv, le, lok, _ = _adaptive(integrand, [center - 2 * X, center - X], cfg)
        rv, re_, rok, _ = _adaptive(integrand, [center + X, center + 2 * X], cfg)
        block = lv.real + rv.real
        total += block
        err += le + re_
        ok &= lok and rok
        X *= 2
        if abs(block) <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
            break
        if X >= LINE_X_CAP:
            truncated = True
            break
    return LineL2(float(total), float(err), X, truncated, bool(ok))


def hardy_norm(
    f: HoloFun,
    heights: Optional[Sequence[float]] = None,
    cfg: QuadConfig = QuadConfig(),
    center: float = 0.0,
) -> SupEstimate:
    """sqrt of the sup over ``heights`` of line_l2.

    ``boundary`` is set when the maximizing height is the smallest one,
    i.e. the sup is approached as y -> 0 rather than attained.
    """
    hs = np.sort(np.asarray(DEFAULT_HEIGHTS if heights is None else heights, dtype=float))
    if hs.size == 0 or np.any(hs <= 0):
        raise ValueError("heights must be a nonempty set of positive numbers")
    lines = [line_l2(f, float(y), cfg, center) for y in hs]
    vals = np.array([max(l.value, 0.0) for l in lines])
    k = int(np.argmax(vals))
    warnings = []
    if any(l.truncated for l in lines):
        warnings.append("line integral truncated at the x cap")
    if not all(l.converged for l in lines):
        warnings.append("line integral did not converge")
    return SupEstimate(
        value=math.sqrt(vals[k]),
        argmax=Point(float(center), float(hs[k])),
        levels=tuple(Level(float(y), math.sqrt(v)) for y, v in zip(hs, vals)),
        divergent=any(l.truncated for l in lines),
        boundary=bool(k == 0),
        evaluations=len(lines),
        warnings=tuple(warnings),
    )
