"""Domain types, the built-in symbol gallery and search-region geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

# Width of the linear core of the sinh-spaced abscissa grid.
X_CORE = 1e-2

GALLERY_IDS = ("zero", "const:<c>", "cayley", "inv", "exp_iz", "exp_isqrtz")

# Surface-grammar text of each gallery symbol (see exprlang).
GALLERY_EXPR = {
    "zero": "0",
    "cayley": "(z-i)/(z+i)",
    "inv": "i/(z+i)",
    "exp_iz": "exp(i*z)",
    "exp_isqrtz": "exp(i*sqrt(z))",
}


class ConfigError(ValueError):
    """Invalid configuration or input; ``field`` names the offending key."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class Point:
    """A point x + iy of the open upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")
        if not self.y > 0:
            raise ValueError(f"Point requires y > 0, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def of(cls, z: complex) -> "Point":
        return cls(float(z.real), float(z.imag))

    def __str__(self):
        return f"({self.x:.17g}, {self.y:.17g})"


def as_complex(p):
    """Coerce a Point, number or array of numbers to complex."""
    if isinstance(p, Point):
        return p.z
    if isinstance(p, np.ndarray):
        return p.astype(complex, copy=False)
    return complex(p)


@dataclass(frozen=True)
class HoloFun:
    """A holomorphic function on the upper half-plane.

    ``fn`` and ``deriv`` take complex scalars or arrays and must be pure.
    ``deriv`` is the exact derivative channel; when it is ``None`` callers
    fall back to Cauchy-circle quadrature.
    """

    fn: Callable
    deriv: Optional[Callable] = None
    label: str = "f"

    def eval(self, p):
        return self.fn(as_complex(p))

    __call__ = eval

    def d(self, p):
        if self.deriv is None:
            raise ValueError(f"{self.label} has no exact derivative channel")
        return self.deriv(as_complex(p))

    def shifted(self, c: float) -> "HoloFun":
        """z -> f(z + c) for real c."""
        c = float(c)
        d = None if self.deriv is None else (lambda z, _d=self.deriv: _d(z + c))
        return HoloFun(lambda z, _f=self.fn: _f(z + c), d, f"{self.label}(z+{c:g})")


def linear_combination(terms: Sequence[tuple[complex, HoloFun]], label=None) -> HoloFun:
    """sum_k c_k f_k; exact derivative kept when every term has one."""
    terms = [(complex(c), f) for c, f in terms]

    def fn(z):
        out = 0
        for c, f in terms:
            out = out + c * f.fn(z)
        return out + np.zeros_like(z)

    deriv = None
    if all(f.deriv is not None for _, f in terms):
        def deriv(z):
            out = 0
            for c, f in terms:
                out = out + c * f.deriv(z)
            return out + np.zeros_like(z)

    if label is None:
        label = " + ".join(f"({c:g})*{f.label}" for c, f in terms)
    return HoloFun(fn, deriv, label)


def constant(c: complex, label=None) -> HoloFun:
    c = complex(c)
    return HoloFun(
        lambda z: c + np.zeros_like(z),
        lambda z: np.zeros_like(z),
        label or f"const:{_fmt_complex(c)}",
    )


def _fmt_complex(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:g}"
    return f"{c.real:g},{c.imag:g}"


def parse_complex(text: str, field: Optional[str] = None) -> complex:
    """Parse ``re`` or ``re,im``."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"expected <re> or <re>,<im>, got {text!r}", field)


def _exp_iz(z):
    return np.exp(1j * z)


def _exp_isqrtz(z):
    # np.sqrt is the principal branch: arg(z) in (0, pi) gives Im sqrt(z) > 0
    return np.exp(1j * np.sqrt(z))


def _d_exp_isqrtz(z):
    s = np.sqrt(z)
    return 1j * np.exp(1j * s) / (2 * s)


_GALLERY = {
    "zero": lambda: constant(0, "zero"),
    "cayley": lambda: HoloFun(lambda z: (z - 1j) / (z + 1j), lambda z: 2j / (z + 1j) ** 2, "cayley"),
    "inv": lambda: HoloFun(lambda z: 1j / (z + 1j), lambda z: -1j / (z + 1j) ** 2, "inv"),
    "exp_iz": lambda: HoloFun(_exp_iz, lambda z: 1j * np.exp(1j * z), "exp_iz"),
    "exp_isqrtz": lambda: HoloFun(_exp_isqrtz, _d_exp_isqrtz, "exp_isqrtz"),
}


def gallery_symbol(id: str) -> HoloFun:
    """Look up a built-in symbol by its public id."""
    if id.startswith("const:"):
        c = parse_complex(id[len("const:"):], "symbol")
        return constant(c, id)
    try:
        return _GALLERY[id]()
    except KeyError:
        raise ConfigError(f"unknown gallery symbol {id!r}; known: {', '.join(GALLERY_IDS)}", "symbol") from None


def gallery_expression(id: str) -> str:
    """Surface-grammar text for a gallery id."""
    if id.startswith("const:"):
        c = parse_complex(id[len("const:"):], "symbol")
        if c.imag == 0:
            return repr(c.real) if c.real >= 0 else f"({c.real!r})"
        return f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i)"
    try:
        return GALLERY_EXPR[id]
    except KeyError:
        raise ConfigError(f"unknown gallery symbol {id!r}", "symbol") from None


@dataclass(frozen=True)
class Strip:
    """Horizontal strip a <= Im z <= b."""

    a: float
    b: float

    def __post_init__(self):
        if not (0 < self.a <= self.b):
            raise ConfigError(f"strip needs 0 < a <= b, got a={self.a}, b={self.b}", "strip")


@dataclass(frozen=True)
class SearchRegion:
    """Rectangle [x_center - x_max, x_center + x_max] x [y_min, y_max] sampled
    on log-spaced heights and sinh-spaced abscissae."""

    y_min: float = 1e-6
    y_max: float = 1e6
    x_max: float = 1e6
    y_grid: int = 61
    x_grid: int = 129
    x_center: float = 0.0

    def __post_init__(self):
        if not (self.y_min > 0 and self.y_min <= self.y_max and math.isfinite(self.y_max)):
            raise ConfigError(f"need 0 < y_min <= y_max, got {self.y_min}, {self.y_max}", "region.y_min")
        if not (self.x_max >= 0 and math.isfinite(self.x_max)):
            raise ConfigError(f"need x_max >= 0, got {self.x_max}", "region.x_max")
        for name in ("y_grid", "x_grid"):
            n = getattr(self, name)
            if int(n) != n or n < 1:
                raise ConfigError(f"{name} must be a positive integer, got {n}", f"region.{name}")
        if self.y_min < self.y_max and self.y_grid < 2:
            raise ConfigError("y_grid must be >= 2 for a nondegenerate height range", "region.y_grid")
        if self.x_max > 0 and self.x_grid < 2:
            raise ConfigError("x_grid must be >= 2 for a nondegenerate abscissa range", "region.x_grid")

    def heights(self) -> np.ndarray:
        if self.y_grid == 1:
            return np.array([math.sqrt(self.y_min * self.y_max)])
        return np.logspace(math.log10(self.y_min), math.log10(self.y_max), self.y_grid)

    def abscissae(self) -> np.ndarray:
        if self.x_grid == 1 or self.x_max == 0:
            return np.full(self.x_grid, float(self.x_center))
        core = min(X_CORE, self.x_max)
        t = np.linspace(-1.0, 1.0, self.x_grid)
        x = core * np.sinh(t * math.asinh(self.x_max / core))
        x[0], x[-1] = -self.x_max, self.x_max
        return self.x_center + x

    @property
    def y_center(self) -> float:
        return math.sqrt(self.y_min * self.y_max)

    def at_scale(self, s: float) -> "SearchRegion":
        """Nested sub-region whose log-extent is the fraction s of this one."""
        yc = self.y_center
        y_lo = yc * (self.y_min / yc) ** s
        y_hi = yc * (self.y_max / yc) ** s
        xc = min(1.0, self.x_max)
        x_hi = self.x_max ** s * xc ** (1 - s) if self.x_max > 0 else 0.0
        ny = max(2, int(round((self.y_grid - 1) * s)) + 1) if y_lo < y_hi else 1
        return SearchRegion(y_lo, y_hi, x_hi, ny, self.x_grid, self.x_center)

    def refined(self, factor: int = 2) -> "SearchRegion":
        """Same bounds, grid spacing divided by ``factor``."""
        ny = (self.y_grid - 1) * factor + 1
        nx = (self.x_grid - 1) * factor + 1
        return SearchRegion(self.y_min, self.y_max, self.x_max, ny, nx, self.x_center)

    def split_heights(self) -> tuple[float, float]:
        """Heights separating the near-boundary strip, the middle band and
        the far region (log-thirds of the height range)."""
        lo, hi = math.log(self.y_min), math.log(self.y_max)
        return math.exp(lo + (hi - lo) / 3), math.exp(lo + 2 * (hi - lo) / 3)

    def contains(self, x, y):
        return (
            (y >= self.y_min * (1 - 1e-12))
            & (y <= self.y_max * (1 + 1e-12))
            & (np.abs(x - self.x_center) <= self.x_max * (1 + 1e-12))
        )


def region_points(r: SearchRegion) -> list[Point]:
    """All grid points, heights outermost."""
    xs = r.abscissae()
    return [Point(float(x), float(y)) for y in r.heights() for x in xs]


@dataclass(frozen=True)
class Level:
    """Supremum over one nested sub-region (or one height for Hardy sups)."""

    scale: float
    value: float
    y_min: Optional[float] = None
    y_max: Optional[float] = None
    x_max: Optional[float] = None


@dataclass(frozen=True)
class SupEstimate:
    value: float
    argmax: Point
    levels: tuple[Level, ...]
    divergent: bool
    boundary: bool = False
    evaluations: int = 0
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def finite(self) -> bool:
        return not self.divergent and math.isfinite(self.value)
