"""Supremum search over half-plane regions.

A search evaluates the statistic on the region grid, picks the best cells
in each part of a three-way split of the region (near-boundary strip, far
region, central box, plus the tails of the middle band), and polishes them
by alternating golden-section sweeps in x and in log y.  Every evaluated
point is kept, so sups over nested sub-regions come from one point cloud
and are monotone by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Level, Point, SearchRegion, SupEstimate

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_SCALES = (0.125, 0.25, 0.5, 1.0)
TAU = 1.5

# part labels for candidate selection
STRIP, BOX, BAND, FAR = 0, 1, 2, 3


def _clean(v):
    v = np.asarray(v, dtype=float)
    return np.where(np.isnan(v), -np.inf, v)


def _quantize(v, digits=12):
    """Round to ``digits`` significant digits so near-ties order by position."""
    v = np.asarray(v, dtype=float)
    out = v.copy()
    ok = np.isfinite(v) & (v != 0)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        mag = 10.0 ** (digits - 1 - np.floor(np.log10(np.abs(v[ok]))))
        q = np.round(v[ok] * mag) / mag
    out[ok] = np.where(np.isfinite(q), q, v[ok])
    return out


def golden_max(fun, lo, hi, iters=40):
    """Vectorized golden-section maximization of ``fun`` on [lo, hi].

    ``fun`` maps an array of abscissae (one per independent problem) to an
    array of values.  Returns (argmax, max, evaluations).
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    c = hi - INVPHI * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc, fd = _clean(fun(c)), _clean(fun(d))
    n_eval = 2 * lo.size
    for _ in range(iters):
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        probe = np.where(left, hi - INVPHI * (hi - lo), lo + INVPHI * (hi - lo))
        fp = _clean(fun(probe))
        n_eval += lo.size
        c, d, fc, fd = (
            np.where(left, probe, d),
            np.where(left, c, probe),
            np.where(left, fp, fd),
            np.where(left, fc, fp),
        )
    better = fc >= fd
    return np.where(better, c, d), np.where(better, fc, fd), n_eval


@dataclass
class Cloud:
    """Every point at which a statistic was evaluated during one search."""

    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    evaluations: int

    def best(self, mask=None, x_center=0.0, y_center=1.0):
        """Index of the maximum; ties go to the point nearest the centre."""
        v = self.v if mask is None else np.where(mask, self.v, -np.inf)
        vmax = v.max()
        if not np.isfinite(vmax):
            tie = v == vmax
        else:
            tie = v >= vmax - 1e-12 * abs(vmax)
        idx = np.flatnonzero(tie)
        dx = np.abs(self.x[idx] - x_center)
        dy = np.abs(np.log(self.y[idx] / y_center))
        order = np.lexsort((dy, dx))
        return int(idx[order[0]])


def _neighbours(grid, values):
    """Left/right neighbours of ``values`` in the sorted array ``grid``."""
    i = np.searchsorted(grid, values)
    left = grid[np.clip(i - 1, 0, len(grid) - 1)]
    j = np.searchsorted(grid, values, side="right")
    right = grid[np.clip(j, 0, len(grid) - 1)]
    return left, right


def explore(
    stat: Callable,
    xs: np.ndarray,
    ys: np.ndarray,
    labels: Callable,
    bounds: tuple[float, float, float, float],
    *,
    seeds: Sequence[complex] = (),
    top_k: int = 5,
    rounds: int = 3,
    iters: int = 40,
    x_center: float = 0.0,
) -> Cloud:
    """Grid sweep plus local golden-section refinement.

    ``labels(x, y)`` assigns each grid point to a part; the ``top_k`` best
    points of every part are refined.  ``bounds`` is (x_lo, x_hi, y_lo, y_hi).
    """
    x_lo, x_hi, y_lo, y_hi = bounds
    xs = np.unique(xs)
    ys = np.unique(ys)
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    seeds = [complex(s) for s in seeds]
    seeds = [s for s in seeds if x_lo <= s.real <= x_hi and y_lo <= s.imag <= y_hi]
    n_grid = X.size
    if seeds:
        X = np.concatenate([X, [s.real for s in seeds]])
        Y = np.concatenate([Y, [s.imag for s in seeds]])
    V = _clean(stat(X + 1j * Y))
    n_eval = X.size

    lab = np.asarray(labels(X, Y))
    cand = []
    for part in np.unique(lab[:n_grid]):
        idx = np.flatnonzero(lab[:n_grid] == part)
        order = np.lexsort((np.abs(X[idx] - x_center), -_quantize(V[idx])))
        cand.extend(idx[order[:top_k]].tolist())
    cand.extend(range(n_grid, X.size))
    cand = np.array(sorted(set(cand)), dtype=int)
    if cand.size == 0 or rounds <= 0:
        return Cloud(X, Y, V, n_eval)

    cx, cy, cv = X[cand].copy(), Y[cand].copy(), V[cand].copy()
    is_seed = cand >= n_grid
    bx_lo, bx_hi = _neighbours(xs, cx)
    by_lo, by_hi = _neighbours(ys, cy)
    bx_lo = np.where(is_seed, cx - 2 * cy, bx_lo)
    bx_hi = np.where(is_seed, cx + 2 * cy, bx_hi)
    by_lo = np.where(is_seed, cy / 4, by_lo)
    by_hi = np.where(is_seed, cy * 4, by_hi)
    bx_lo, bx_hi = np.clip(bx_lo, x_lo, x_hi), np.clip(bx_hi, x_lo, x_hi)
    ly_lo = np.log(np.clip(by_lo, y_lo, y_hi))
    ly_hi = np.log(np.clip(by_hi, y_lo, y_hi))

    extra_x, extra_y, extra_v = [], [], []
    for _ in range(rounds):
        t, ft, k = golden_max(lambda t: stat(t + 1j * cy), bx_lo, bx_hi, iters)
        n_eval += k
        up = ft > cv + 1e-12 * np.abs(cv)
        cx, cv = np.where(up, t, cx), np.where(up, ft, cv)
        extra_x.append(cx.copy()), extra_y.append(cy.copy()), extra_v.append(cv.copy())

        s, fs, k = golden_max(lambda s: stat(cx + 1j * np.exp(s)), ly_lo, ly_hi, iters)
        n_eval += k
        up = fs > cv + 1e-12 * np.abs(cv)
        cy, cv = np.where(up, np.exp(s), cy), np.where(up, fs, cv)
        extra_x.append(cx.copy()), extra_y.append(cy.copy()), extra_v.append(cv.copy())

    return Cloud(
        np.concatenate([X, *extra_x]),
        np.concatenate([Y, *extra_y]),
        np.concatenate([V, *extra_v]),
        n_eval,
    )


def region_parts(region: SearchRegion):
    """Label function for the strip / central box / band tails / far split."""
    y_lo, y_hi = region.split_heights()
    x_box = min(region.x_max, y_hi)

    def labels(x, y):
        out = np.full(x.shape, BAND)
        out[np.abs(x - region.x_center) <= x_box] = BOX
        out[y < y_lo] = STRIP
        out[y > y_hi] = FAR
        return out

    return labels


def sup_search(
    stat: Callable,
    region: SearchRegion,
    *,
    seeds: Sequence[complex] = (),
    strip_density: int = 1,
    scales: Sequence[float] = DEFAULT_SCALES,
    tau: float = TAU,
    top_k: int = 5,
    rounds: int = 3,
) -> SupEstimate:
    """Estimate sup of a nonnegative statistic over ``region``.

    ``stat`` maps complex arrays to real arrays.  ``levels`` holds the sup
    over each nested sub-region ``region.at_scale(s)``; the estimate is
    flagged divergent when the sup grows by more than ``tau`` between the
    two largest scales while the maximizer sits on the outer edge of the
    grid.
    """
    xs = region.abscissae()
    ys = region.heights()
    grid_ys = ys
    if strip_density > 1 and region.y_grid > 1:
        y_split = region.split_heights()[0]
        n_strip = int(np.count_nonzero(ys < y_split))
        dense = np.logspace(math.log10(region.y_min), math.log10(y_split), max(2, n_strip * strip_density))
        ys = np.union1d(ys, dense)
    x_lo = region.x_center - region.x_max
    x_hi = region.x_center + region.x_max
    cloud = explore(
        stat, xs, ys, region_parts(region),
        (x_lo, x_hi, region.y_min, region.y_max),
        seeds=seeds, top_k=top_k, rounds=rounds, x_center=region.x_center,
    )

    levels = []
    for s in scales:
        sub = region.at_scale(s)
        mask = sub.contains(cloud.x, cloud.y)
        val = float(cloud.v[mask].max()) if mask.any() else 0.0
        levels.append(Level(float(s), max(val, 0.0), sub.y_min, sub.y_max, sub.x_max))

    i = cloud.best(x_center=region.x_center, y_center=region.y_center)
    value = max(float(cloud.v[i]), 0.0)
    argmax = Point(float(cloud.x[i]), float(cloud.y[i]))

    y_sorted = np.unique(grid_ys)
    low_edge = argmax.y <= y_sorted[min(1, y_sorted.size - 1)]
    high_edge = argmax.y >= y_sorted[max(y_sorted.size - 2, 0)]
    xd = np.unique(np.abs(xs - region.x_center))
    x_edge = region.x_max > 0 and abs(argmax.x - region.x_center) >= xd[max(xd.size - 2, 0)]
    on_edge = bool(low_edge or high_edge or x_edge)

    warnings = []
    if not math.isfinite(value):
        divergent = True
        warnings.append("statistic is not finite somewhere in the region")
    elif len(levels) >= 2:
        last, prev = levels[-1].value, levels[-2].value
        divergent = bool(last > tau * prev and last > 0 and on_edge)
    else:
        divergent = False
    return SupEstimate(
        value=value,
        argmax=argmax,
        levels=tuple(levels),
        divergent=divergent,
        boundary=bool(low_edge),
        evaluations=cloud.evaluations,
        warnings=tuple(warnings),
    )
