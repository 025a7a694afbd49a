"""Volterra-type operators J_g, I_g, the multiplier M_g, Bloch norms and the
extremal test functions f_w."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

import numpy as np

from .core import ConfigError, HoloFun, Point, SearchRegion, SupEstimate, as_complex
from .quad import QuadConfig, derivative_fn, path_integral
from .search import sup_search

SQRT_PI = math.sqrt(math.pi)
DEFAULT_Z0 = Point(0.0, 1.0)


class OperatorKind(str, Enum):
    JG = "jg"
    IG = "ig"
    MG = "mg"

    @classmethod
    def parse(cls, text) -> "OperatorKind":
        try:
            return cls(str(text).lower())
        except ValueError:
            raise ConfigError(f"unknown operator {text!r}; expected jg, ig or mg", "op") from None


@dataclass(frozen=True)
class OperatorResult:
    value: complex
    quad_error: float
    path: tuple[Point, ...]


def extremal_fw(w) -> HoloFun:
    """f_w(z) = (Im w)^{3/2} / (sqrt(pi) (z - conj(w))^2).

    The pole sits at conj(w) in the lower half-plane, and f_w has H2 norm
    1/sqrt(2) for every w.
    """
    w = as_complex(w)
    if not w.imag > 0:
        raise ValueError(f"extremal_fw needs Im w > 0, got {w}")
    c = w.imag ** 1.5 / SQRT_PI
    wb = w.conjugate()
    return HoloFun(
        lambda z: c / (z - wb) ** 2,
        lambda z: -2 * c / (z - wb) ** 3,
        f"fw:{w.real:.17g},{w.imag:.17g}",
    )


def apply(
    kind,
    g: HoloFun,
    f: HoloFun,
    z0,
    z,
    cfg: QuadConfig = QuadConfig(),
    via: Sequence = (),
) -> OperatorResult:
    """(J_g f)(z), (I_g f)(z) or (M_g f)(z).

    J_g and I_g integrate from ``z0`` to ``z`` along a straight segment, or
    along the polyline through ``via`` when given.
    """
    kind = OperatorKind.parse(kind) if not isinstance(kind, OperatorKind) else kind
    za, zb = as_complex(z0), as_complex(z)
    if kind is OperatorKind.MG:
        return OperatorResult(complex(g.fn(zb) * f.fn(zb)), 0.0, (Point.of(zb),))
    pts = [za, *(as_complex(p) for p in via), zb]
    res = path_integral(OperatorImage(kind, g, f).derivative(cfg), pts, cfg)
    return OperatorResult(res.value, res.error, tuple(Point.of(p) for p in pts))


def two_leg_path(z0, z) -> tuple[complex]:
    """Corner of the polyline z0 -> (Re z + i Im z0) -> z."""
    za, zb = as_complex(z0), as_complex(z)
    return (complex(zb.real, za.imag),)


def ftc_identity_check(g: HoloFun, f: HoloFun, z0, sample: Iterable, cfg: QuadConfig = QuadConfig()) -> float:
    """max |J_g f + I_g f - f g + f(z0) g(z0)| over ``sample``."""
    za = as_complex(z0)
    base = complex(f.fn(za) * g.fn(za))
    worst = 0.0
    for p in sample:
        z = as_complex(p)
        j = apply(OperatorKind.JG, g, f, za, z, cfg).value
        i = apply(OperatorKind.IG, g, f, za, z, cfg).value
        m = complex(f.fn(z) * g.fn(z))
        worst = max(worst, abs(j + i - m + base))
    return worst


@dataclass(frozen=True)
class OperatorImage:
    """F = L f for L one of J_g, I_g, M_g with base point z0."""

    kind: OperatorKind
    g: HoloFun
    f: HoloFun
    z0: Point = DEFAULT_Z0

    def derivative(self, cfg: QuadConfig = QuadConfig()):
        """Vectorized F'.  For J_g and I_g this is the integrand itself."""
        g, f = self.g, self.f
        if self.kind is OperatorKind.JG:
            dg = derivative_fn(g, cfg)
            return lambda z: f.fn(z) * dg(z)
        df = derivative_fn(f, cfg)
        if self.kind is OperatorKind.IG:
            return lambda z: df(z) * g.fn(z)
        dg = derivative_fn(g, cfg)
        return lambda z: df(z) * g.fn(z) + f.fn(z) * dg(z)

    def value_at(self, z, cfg: QuadConfig = QuadConfig()) -> complex:
        return apply(self.kind, self.g, self.f, self.z0, z, cfg).value

    def as_function(self, cfg: QuadConfig = QuadConfig()) -> HoloFun:
        """F as a HoloFun (one quadrature per point) with F' exact."""

        def fn(z):
            zz = np.asarray(z, dtype=complex)
            out = np.array([self.value_at(v, cfg) for v in zz.ravel()], dtype=complex)
            return out.reshape(zz.shape) if zz.ndim else complex(out[0])

        return HoloFun(fn, self.derivative(cfg), f"{self.kind.value}[{self.g.label}]({self.f.label})")


Describable = Union[OperatorImage, HoloFun]


def _derivative_of(F: Describable, cfg: QuadConfig):
    if isinstance(F, OperatorImage):
        return F.derivative(cfg)
    return derivative_fn(F, cfg)


def bloch_seminorm(
    F: Describable,
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    seeds: Sequence = (),
    strip_density: int = 1,
) -> SupEstimate:
    """sup of Im z |F'(z)| over ``region``."""
    dF = _derivative_of(F, cfg)

    def stat(z):
        return z.imag * np.abs(dF(z))

    return sup_search(stat, region, seeds=[as_complex(s) for s in seeds], strip_density=strip_density)


@dataclass(frozen=True)
class BlochNorm:
    value: float
    point_value: float
    seminorm: SupEstimate

    @property
    def divergent(self) -> bool:
        return self.seminorm.divergent


def bloch_norm(
    F: Describable,
    region: SearchRegion = SearchRegion(),
    cfg: QuadConfig = QuadConfig(),
    seeds: Sequence = (),
    strip_density: int = 1,
) -> BlochNorm:
    """|F(i)| + sup Im z |F'(z)|."""
    if isinstance(F, OperatorImage):
        at_i = abs(F.value_at(1j, cfg))
    else:
        at_i = abs(complex(F.eval(1j)))
    semi = bloch_seminorm(F, region, cfg, seeds, strip_density)
    value = math.inf if semi.divergent else at_i + semi.value
    return BlochNorm(value, at_i, semi)


def extremal_statistic(kind, g: HoloFun, w, cfg: QuadConfig = QuadConfig()) -> float:
    """Im w |(L f_w)'(w)|, evaluated through f_w and g."""
    kind = OperatorKind.parse(kind) if not isinstance(kind, OperatorKind) else kind
    w = as_complex(w)
    fw = extremal_fw(w)
    if kind is OperatorKind.JG:
        return w.imag * abs(complex(fw.fn(w) * derivative_fn(g, cfg)(w)))
    if kind is OperatorKind.IG:
        return w.imag * abs(complex(fw.deriv(w) * g.fn(w)))
    raise ConfigError("extremal statistic is defined for jg and ig only", "op")


def extremal_identity(kind, g: HoloFun, w, cfg: QuadConfig = QuadConfig()) -> float:
    """Closed form of ``extremal_statistic``: (Im w)^{1/2}|g'(w)|/(4 sqrt(pi))
    for J_g and |g(w)|/(4 sqrt(pi) (Im w)^{1/2}) for I_g."""
    kind = OperatorKind.parse(kind) if not isinstance(kind, OperatorKind) else kind
    w = as_complex(w)
    if kind is OperatorKind.JG:
        return math.sqrt(w.imag) * abs(complex(derivative_fn(g, cfg)(w))) / (4 * SQRT_PI)
    if kind is OperatorKind.IG:
        return abs(complex(g.fn(w))) / (4 * SQRT_PI * math.sqrt(w.imag))
    raise ConfigError("extremal statistic is defined for jg and ig only", "op")
